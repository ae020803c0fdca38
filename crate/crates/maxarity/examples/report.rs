//! Summarize an expression: distinct affine pieces, linear regions, and the
//! minimal-arity numbers.

use maxarity::json::expr_from_str;
use maxarity::report::report;

fn main() -> maxarity::Result<()> {
    for (name, source) in [
        ("max(0,x,y)", include_str!("data/g1.json")),
        ("max(0,x,y) + max(0,-x,-y)", include_str!("data/g3.json")),
        ("6*max(0,x,y) + max(0,-x,-y)", include_str!("data/g4.json")),
    ] {
        let f = expr_from_str(source)?;
        let r = report(&f)?;
        println!(
            "{name}: {} affine pieces, {} linear regions, k* = {}, depth bound = {}",
            r.affine_pieces, r.linear_regions, r.k_star, r.depth_bound
        );
    }
    Ok(())
}
