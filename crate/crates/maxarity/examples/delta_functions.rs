//! Tabulate the delta function of a gradient field along a flag, and
//! compare the verdicts for two expressions that look alike but have
//! different minimal arity.

use maxarity::cli::parse_flag_spec;
use maxarity::delta::GradientField;
use maxarity::json::expr_from_str;
use maxarity::rat::format_rat;

fn show(name: &str, source: &str) -> maxarity::Result<()> {
    let f = expr_from_str(source)?;
    let flag = parse_flag_spec("x - y = 0", f.dimension())?;
    let field = GradientField::new(f);
    let d = field.delta(&flag)?;
    println!("{name}, jump of the gradient across x = y:");
    for (cell, value) in d.family.full_cells().zip(&d.values) {
        println!(
            "  at ({}): ({})",
            cell.sample.iter().map(format_rat).collect::<Vec<_>>().join(", "),
            value.iter().map(format_rat).collect::<Vec<_>>().join(", ")
        );
    }
    println!("  constant: {}", d.is_constant());
    Ok(())
}

fn main() -> maxarity::Result<()> {
    show("max(0,x,y) + max(0,-x,-y)", include_str!("data/g3.json"))?;
    show("6*max(0,x,y) + max(0,-x,-y)", include_str!("data/g4.json"))?;
    Ok(())
}
