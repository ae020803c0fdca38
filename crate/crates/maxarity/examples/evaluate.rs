//! Load an expression from the JSON interchange format and evaluate it
//! exactly at a few rational points.

use maxarity::json::expr_from_str;
use maxarity::rat::{format_rat, parse_rat};

fn main() -> maxarity::Result<()> {
    let f = expr_from_str(include_str!("data/g3.json"))?;
    println!("f = {f}");
    for point in ["2,-1", "0,0", "1/2,-3/7", "-5,4"] {
        let x: Vec<_> = point
            .split(',')
            .map(|c| parse_rat(c).unwrap())
            .collect();
        println!("f({point}) = {}", format_rat(&f.eval(&x)?));
    }
    Ok(())
}
