//! Certify the minimal number of max arguments needed to represent each
//! fixture, with the refuting flag when one exists.

use maxarity::arity::minimal_arity;
use maxarity::json::expr_from_str;

fn main() -> maxarity::Result<()> {
    let fixtures = [
        ("max(0,x,y)", include_str!("data/g1.json")),
        ("max(0,x,y) + max(0,-x,-y)", include_str!("data/g3.json")),
        ("6*max(0,x,y) + max(0,-x,-y)", include_str!("data/g4.json")),
        ("max(0,x,y,z)", include_str!("data/maxzero3.json")),
        ("2x - 3y + 1/2", include_str!("data/affine.json")),
    ];
    for (name, source) in fixtures {
        let f = expr_from_str(source)?;
        let cert = minimal_arity(&f)?;
        println!(
            "{name}: k* = {}, representation depth bound = {}",
            cert.k_star, cert.depth_bound
        );
    }
    Ok(())
}
