//! Decide exact equality of piecewise-linear expressions: certify two
//! classic identities and refute a non-identity with a witness point.

use maxarity::expr::{equivalent, Equivalence};
use maxarity::json::expr_from_str;
use maxarity::rat::format_rat;

fn main() -> maxarity::Result<()> {
    let g3 = expr_from_str(include_str!("data/g3.json"))?;
    let one_max = expr_from_str(include_str!("data/sum_as_one_max.json"))?;
    let two_arg = expr_from_str(include_str!("data/sum_as_two_arg_maxes.json"))?;
    let g4 = expr_from_str(include_str!("data/g4.json"))?;

    for (name, other) in [("a single 7-argument max", &one_max), ("three 2-argument maxes", &two_arg)] {
        match equivalent(&g3, other)? {
            Equivalence::Equal => println!("max(0,x,y) + max(0,-x,-y) equals {name}"),
            Equivalence::Differs { witness, .. } => {
                println!("unexpected difference at {witness:?}")
            }
        }
    }

    match equivalent(&g3, &g4)? {
        Equivalence::Equal => println!("unexpected equality"),
        Equivalence::Differs { witness, lhs, rhs } => println!(
            "the two functions differ at ({}, {}): {} vs {}",
            format_rat(&witness[0]),
            format_rat(&witness[1]),
            format_rat(&lhs),
            format_rat(&rhs)
        ),
    }
    Ok(())
}
