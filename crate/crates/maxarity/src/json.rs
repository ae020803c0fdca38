//! JSON serialization of expressions, certificates, delta tables,
//! decompositions, and reports. Rationals serialize as strings `"p/q"`, or
//! `"p"` when the denominator is 1, so round-trips are lossless.

use serde::{Deserialize, Serialize};

use crate::arity::ArityCertificate;
use crate::decompose::Decomposition;
use crate::delta::{DeltaFunction, Flag, GradientField};
use crate::expr::{AffineFunc, CpwlExpr, MaxTerm};
use crate::rat::{format_rat, parse_rat, QVec, Rat};
use crate::report::Report;
use crate::{Error, Result};

fn fmt_vec(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

fn parse_vec(v: &[String]) -> Result<QVec> {
    v.iter().map(|s| parse_rat(s)).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AffineJson {
    pub a: Vec<String>,
    pub b: String,
}

impl AffineJson {
    pub fn from_func(f: &AffineFunc) -> Self {
        AffineJson { a: fmt_vec(&f.a), b: format_rat(&f.b) }
    }

    pub fn to_func(&self) -> Result<AffineFunc> {
        Ok(AffineFunc::new(parse_vec(&self.a)?, parse_rat(&self.b)?))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TermJson {
    pub coefficient: String,
    pub arguments: Vec<AffineJson>,
}

/// The expression interchange format:
/// `{"dimension": n, "affine": {"a": [...], "b": "..."}, "terms": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExprJson {
    pub dimension: usize,
    pub affine: AffineJson,
    pub terms: Vec<TermJson>,
}

impl ExprJson {
    pub fn from_expr(f: &CpwlExpr) -> Self {
        ExprJson {
            dimension: f.dimension(),
            affine: AffineJson::from_func(f.affine_part()),
            terms: f
                .terms()
                .iter()
                .map(|t| TermJson {
                    coefficient: format_rat(&t.coefficient),
                    arguments: t.arguments.iter().map(AffineJson::from_func).collect(),
                })
                .collect(),
        }
    }

    pub fn to_expr(&self) -> Result<CpwlExpr> {
        let affine = self.affine.to_func()?;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok(MaxTerm {
                    coefficient: parse_rat(&t.coefficient)?,
                    arguments: t
                        .arguments
                        .iter()
                        .map(AffineJson::to_func)
                        .collect::<Result<Vec<_>>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        CpwlExpr::new(self.dimension, affine, terms)
    }
}

pub fn expr_to_string(f: &CpwlExpr) -> String {
    serde_json::to_string_pretty(&ExprJson::from_expr(f)).expect("serialization cannot fail")
}

pub fn expr_from_str(s: &str) -> Result<CpwlExpr> {
    let dto: ExprJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    dto.to_expr()
}

/// A flag as a list of members, each given by the reduced equations
/// `a . x = b` cutting it out of the ambient space.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FlagJson {
    pub members: Vec<Vec<AffineJson>>,
}

impl FlagJson {
    pub fn from_flag(flag: &Flag) -> Self {
        let n = flag.ambient();
        let members = flag
            .spaces()
            .iter()
            .map(|h| {
                h.equations()
                    .iter()
                    .map(|row| AffineJson {
                        a: fmt_vec(&row[..n]),
                        b: format_rat(&row[n]),
                    })
                    .collect()
            })
            .collect();
        FlagJson { members }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessJson {
    pub flag: FlagJson,
    pub point_a: Vec<String>,
    pub point_b: Vec<String>,
    pub value_a: Vec<String>,
    pub value_b: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstancyJson {
    pub flag: FlagJson,
    pub value: Vec<String>,
}

/// Certificate format:
/// `{"k_star": k, "depth_bound": d, "witness": {...}, "constancy": [...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CertificateJson {
    pub k_star: usize,
    pub depth_bound: usize,
    /// Present when `k_star >= 2`: a flag of length `k_star - 2` whose delta
    /// separates two concrete points.
    pub witness: Option<WitnessJson>,
    /// The deepest non-constant flags' extensions, all constant, with their
    /// values: the evidence that no deeper obstruction exists.
    pub constancy: Vec<ConstancyJson>,
}

pub fn certificate_json(
    field: &GradientField,
    cert: &ArityCertificate,
) -> Result<CertificateJson> {
    let witness = match &cert.lower_bound_witness {
        None => None,
        Some((flag, a, b)) => {
            let d = field.delta(flag)?;
            Some(WitnessJson {
                flag: FlagJson::from_flag(flag),
                point_a: fmt_vec(a),
                point_b: fmt_vec(b),
                value_a: fmt_vec(d.value_at(a)?),
                value_b: fmt_vec(d.value_at(b)?),
            })
        }
    };
    let deepest = cert.nonconstant_flags.iter().map(Flag::len).max();
    let mut constancy = Vec::new();
    if let Some(m) = deepest {
        for flag in cert.nonconstant_flags.iter().filter(|f| f.len() == m) {
            for cand in field.extension_candidates(flag) {
                let ext = flag.extend(cand)?;
                let d = field.delta(&ext)?;
                debug_assert!(d.is_constant());
                constancy.push(ConstancyJson {
                    flag: FlagJson::from_flag(&ext),
                    value: fmt_vec(&d.values[0]),
                });
            }
        }
    }
    Ok(CertificateJson {
        k_star: cert.k_star,
        depth_bound: cert.depth_bound,
        witness,
        constancy,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaCellJson {
    pub sample: Vec<String>,
    pub value: Vec<String>,
}

/// Delta table: one entry per full-dimensional cell of the flag's last
/// member under the gradient arrangement.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeltaTableJson {
    pub flag: FlagJson,
    pub cells: Vec<DeltaCellJson>,
    pub constant: bool,
    pub zero: bool,
}

pub fn delta_table_json(d: &DeltaFunction) -> DeltaTableJson {
    let cells = d
        .family
        .full_cells()
        .zip(&d.values)
        .map(|(c, v)| DeltaCellJson { sample: fmt_vec(&c.sample), value: fmt_vec(v) })
        .collect();
    DeltaTableJson {
        flag: FlagJson::from_flag(&d.flag),
        cells,
        constant: d.is_constant(),
        zero: d.is_zero(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PeelStepJson {
    pub flag: FlagJson,
    pub base_point: Vec<String>,
    pub core_dim: usize,
    pub piece: ExprJson,
}

/// Decomposition output: the rewritten expression in the interchange format
/// plus the certificate numbers and an optional peel trace.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecompositionJson {
    pub k_star: usize,
    pub achieved_arity: usize,
    pub synthesized: bool,
    pub expression: ExprJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<PeelStepJson>>,
}

pub fn decomposition_json(d: &Decomposition, with_trace: bool) -> DecompositionJson {
    DecompositionJson {
        k_star: d.k_star,
        achieved_arity: d.achieved_arity,
        synthesized: d.synthesized,
        expression: ExprJson::from_expr(&d.result),
        trace: with_trace.then(|| {
            d.steps
                .iter()
                .map(|s| PeelStepJson {
                    flag: FlagJson::from_flag(&s.flag),
                    base_point: fmt_vec(&s.base_point),
                    core_dim: s.core_dim,
                    piece: ExprJson::from_expr(&s.piece),
                })
                .collect()
        }),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportJson {
    pub dimension: usize,
    pub term_count: usize,
    pub arity: usize,
    pub affine_pieces: usize,
    pub linear_regions: usize,
    pub k_star: usize,
    pub depth_bound: usize,
    pub timing_ms: u128,
}

pub fn report_json(r: &Report, timing_ms: u128) -> ReportJson {
    ReportJson {
        dimension: r.dimension,
        term_count: r.term_count,
        arity: r.arity,
        affine_pieces: r.affine_pieces,
        linear_regions: r.linear_regions,
        k_star: r.k_star,
        depth_bound: r.depth_bound,
        timing_ms,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{qvec, rat};

    #[test]
    fn expression_round_trip() {
        let g3 = CpwlExpr::new(
            2,
            AffineFunc::zero(2),
            vec![
                MaxTerm {
                    coefficient: rat(1),
                    arguments: vec![
                        AffineFunc::zero(2),
                        AffineFunc::new(qvec(&[1, 0]), rat(0)),
                        AffineFunc::new(qvec(&[0, 1]), rat(0)),
                    ],
                },
                MaxTerm {
                    coefficient: rat(1),
                    arguments: vec![
                        AffineFunc::zero(2),
                        AffineFunc::new(qvec(&[-1, 0]), rat(0)),
                        AffineFunc::new(qvec(&[0, -1]), rat(0)),
                    ],
                },
            ],
        )
        .unwrap();
        let s = expr_to_string(&g3);
        let back = expr_from_str(&s).unwrap();
        assert_eq!(back, g3);
        // And structurally: the canonical form survives a second trip.
        assert_eq!(expr_to_string(&back), s);
    }

    #[test]
    fn rationals_as_strings() {
        let f = CpwlExpr::affine_expr(AffineFunc::new(
            vec![crate::rat::ratio(1, 3)],
            crate::rat::ratio(-7, 2),
        ));
        let s = expr_to_string(&f);
        assert!(s.contains("\"1/3\""));
        assert!(s.contains("\"-7/2\""));
    }

    #[test]
    fn parse_error_reported() {
        assert!(matches!(expr_from_str("{"), Err(Error::Parse(_))));
        assert!(matches!(
            expr_from_str("{\"dimension\": 1, \"affine\": {\"a\": [\"x\"], \"b\": \"0\"}, \"terms\": []}"),
            Err(Error::Parse(_))
        ));
    }
}
