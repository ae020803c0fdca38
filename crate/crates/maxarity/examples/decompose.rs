//! Rewrite an expression so that no max term has more arguments than the
//! certified minimum, and double-check the result.

use maxarity::decompose::decompose;
use maxarity::expr::{equivalent, Equivalence};
use maxarity::json::expr_from_str;

fn main() -> maxarity::Result<()> {
    for (name, source) in [
        ("max(0,x,y) + max(0,-x,-y)", include_str!("data/g3.json")),
        ("6*max(0,x,y) + max(0,-x,-y)", include_str!("data/g4.json")),
    ] {
        let f = expr_from_str(source)?;
        let d = decompose(&f)?;
        println!("{name}:");
        println!("  arity as written = {}, k* = {}", f.arity(), d.k_star);
        println!("  rewritten with arity {}: {}", d.achieved_arity, d.result);
        match equivalent(&f, &d.result)? {
            Equivalence::Equal => println!("  verified equal to the input"),
            Equivalence::Differs { witness, .. } => println!("  MISMATCH at {witness:?}"),
        }
    }
    Ok(())
}
