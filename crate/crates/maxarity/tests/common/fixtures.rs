//! Shared test fixtures: the worked examples and parametric families used
//! across the integration suite.

use maxarity::expr::{AffineFunc, CpwlExpr, MaxTerm};
use maxarity::rat::{qvec, rat, Rat};

fn func(a: &[i64], b: i64) -> AffineFunc {
    AffineFunc::new(qvec(a), rat(b))
}

fn term(coefficient: i64, args: &[(&[i64], i64)]) -> MaxTerm {
    MaxTerm {
        coefficient: rat(coefficient),
        arguments: args.iter().map(|(a, b)| func(a, *b)).collect(),
    }
}

fn expr(dim: usize, terms: Vec<MaxTerm>) -> CpwlExpr {
    CpwlExpr::new(dim, AffineFunc::zero(dim), terms).unwrap()
}

/// max(0, x, y): the simplest function needing 3-argument maxes.
pub fn g1() -> CpwlExpr {
    expr(2, vec![term(1, &[(&[0, 0], 0), (&[1, 0], 0), (&[0, 1], 0)])])
}

/// max(0, -x, -y): the reflection of g1.
pub fn g2() -> CpwlExpr {
    expr(2, vec![term(1, &[(&[0, 0], 0), (&[-1, 0], 0), (&[0, -1], 0)])])
}

/// g1 + g2: representable with 2-argument maxes.
pub fn g3() -> CpwlExpr {
    g1().add(&g2()).unwrap()
}

/// 6*g1 + g2: not representable with 2-argument maxes.
pub fn g4() -> CpwlExpr {
    g1().scale(&rat(6)).add(&g2()).unwrap()
}

/// g1 + g2 written as a single 7-argument max.
pub fn sum_as_one_max() -> CpwlExpr {
    expr(
        2,
        vec![term(
            1,
            &[
                (&[0, 0], 0),
                (&[1, 0], 0),
                (&[0, 1], 0),
                (&[-1, 0], 0),
                (&[0, -1], 0),
                (&[1, -1], 0),
                (&[-1, 1], 0),
            ],
        )],
    )
}

/// g1 + g2 written with three 2-argument maxes.
pub fn sum_as_two_arg_maxes() -> CpwlExpr {
    expr(
        2,
        vec![
            term(1, &[(&[1, 0], 0), (&[0, 1], 0)]),
            term(1, &[(&[0, -1], 0), (&[1, -1], 0)]),
            term(1, &[(&[-1, 0], 0), (&[-1, 1], 0)]),
        ],
    )
}

/// The intermediate form linking the two rewritings of g1 + g2:
/// max(-x, y-x) + max(0, x, 2x-y, x-y).
pub fn sum_intermediate() -> CpwlExpr {
    expr(
        2,
        vec![
            term(1, &[(&[-1, 0], 0), (&[-1, 1], 0)]),
            term(1, &[(&[0, 0], 0), (&[1, 0], 0), (&[2, -1], 0), (&[1, -1], 0)]),
        ],
    )
}

/// max(0, x1, ..., xn): minimal arity n+1.
pub fn maxzero(n: usize) -> CpwlExpr {
    let mut args: Vec<AffineFunc> = vec![AffineFunc::zero(n)];
    for i in 0..n {
        let mut a = vec![Rat::from_integer(0.into()); n];
        a[i] = rat(1);
        args.push(AffineFunc::new(a, rat(0)));
    }
    CpwlExpr::new(
        n,
        AffineFunc::zero(n),
        vec![MaxTerm { coefficient: rat(1), arguments: args }],
    )
    .unwrap()
}

/// A pure affine function, minimal arity 1.
pub fn affine_fixture() -> CpwlExpr {
    CpwlExpr::new(2, func(&[2, -3], 1), vec![]).unwrap()
}
