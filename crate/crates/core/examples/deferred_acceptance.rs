//! Reassigning evicted guests with deferred acceptance.
//!
//! Two people were evicted from an over-full table. Both prefer C1, which
//! has one free seat and likes v5 better; C2 takes the other.

use nalgebra::DMatrix;
use seating::capacity::{deferred_acceptance, EvictionStack, ScoreMatrix, StackEntry};

fn main() -> seating::Result<()> {
    let stack = EvictionStack {
        entries: vec![
            StackEntry { person: 3, membership: vec![0.6, 0.4] },
            StackEntry { person: 5, membership: vec![0.7, 0.3] },
        ],
    };
    let scores = ScoreMatrix {
        scores: DMatrix::from_row_slice(2, 2, &[5.0, 12.0, 0.0, 0.0]),
        eligible: vec![true, true],
    };
    for (person, table) in deferred_acceptance(&stack, &scores, &[1, 1])? {
        println!("v{person} -> C{}", table + 1);
    }
    Ok(())
}
