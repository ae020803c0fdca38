//! Enumerate the cells of the hyperplane arrangement induced by an
//! expression's max terms: every cell of every dimension, with an interior
//! sample point.

use maxarity::arrangement::{arrangement_of, enumerate_cells};
use maxarity::json::expr_from_str;
use maxarity::linalg::AffineSubspace;
use maxarity::rat::format_rat;

fn main() -> maxarity::Result<()> {
    let g1 = expr_from_str(include_str!("data/g1.json"))?;
    let hyperplanes = arrangement_of(&g1);
    println!("{} hyperplanes:", hyperplanes.len());
    for h in &hyperplanes {
        println!(
            "  [{}] . x = {}",
            h.normal.iter().map(format_rat).collect::<Vec<_>>().join(", "),
            format_rat(&h.offset)
        );
    }

    let family = enumerate_cells(&hyperplanes, &AffineSubspace::whole_space(2));
    println!("{} cells:", family.cells.len());
    for cell in &family.cells {
        println!(
            "  dim {} with sample ({})",
            cell.dim,
            cell.sample.iter().map(format_rat).collect::<Vec<_>>().join(", ")
        );
    }
    Ok(())
}
