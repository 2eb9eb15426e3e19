//! Warn when keep-together chains join people who should sit apart.

use seating::affinity::{detect_contradictions, Category, Relationship, RelationshipSpec};

fn main() -> seating::Result<()> {
    let spec = RelationshipSpec::new(vec![
        Relationship::new("anya", "xander", Category::KeepTogether),
        Relationship::new("xander", "willow", Category::KeepTogether),
        Relationship::new("anya", "willow", Category::KeepApart),
        Relationship::new("giles", "spike", Category::BetterApart),
    ])?;
    let warnings = detect_contradictions(&spec);
    println!("{} warning(s)", warnings.len());
    for w in warnings {
        println!("- {}", w.description);
    }
    Ok(())
}
