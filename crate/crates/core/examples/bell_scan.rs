//! Scans spin angle triples and counts Bell violations. Pass a step in
//! radians to change the grid (default π/12).

use qlgame::classicality::{bell_grid_scan, bell_scan_row, DEFAULT_GRID_STEP};

fn main() -> qlgame::Result<()> {
    let step = std::env::args()
        .nth(1)
        .map_or(DEFAULT_GRID_STEP, |s| s.parse().expect("step in radians"));
    let rows = bell_grid_scan(step)?;
    let violated = rows.iter().filter(|r| r.violated).count();
    let infeasible = rows.iter().filter(|r| !r.lp_feasible).count();
    let both = rows.iter().filter(|r| r.violated && !r.lp_feasible).count();
    println!(
        "{} triples, {violated} violate the inequality, {infeasible} have no joint",
        rows.len()
    );
    println!("violations without a joint: {both}/{violated}");

    let third = std::f64::consts::PI / 3.0;
    let r = bell_scan_row([0.0, 2.0 * third, third])?;
    println!("(0, 2π/3, π/3): lhs={} rhs={} violated={}", r.lhs, r.rhs, r.violated);
    Ok(())
}
