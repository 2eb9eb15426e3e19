//! Solve from CSV files, as `seating solve` does, and re-read the plan.

use seating::cli::{read_plan, run_solve, SolveArgs};

fn main() -> std::io::Result<()> {
    let dir = std::env::temp_dir().join("seating-example");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("people.csv"), "id,name\nb,Buffy\nx,Xander\nw,Willow\ng,Giles\nc,Cordelia\n")?;
    std::fs::write(
        dir.join("relationships.csv"),
        "person_a,person_b,category\nb,x,keep_together\nx,w,better_together\nc,x,better_apart\ng,b,better_together\n",
    )?;
    std::fs::write(dir.join("tables.csv"), "table_id,capacity\nhead,3\nside,3\n")?;

    let args = SolveArgs {
        people: dir.join("people.csv"),
        relationships: dir.join("relationships.csv"),
        tables: dir.join("tables.csv"),
        out: dir.join("plan.json"),
        seed: 0,
        epsilon: None,
        max_iter: 100,
        neutral_weight: 0.1,
        oracle: true,
        quiet: false,
    };
    let run = run_solve(&args);
    print!("{}", run.report);
    if let Ok(plan) = read_plan(&args.out) {
        println!("\n{} written with {} assignments", args.out.display(), plan.assignments.len());
    }
    std::process::exit(run.exit_code);
}
