//! The JSON complex schema and the builtin example library.

use homgrow_core::group_ring::{
    circle_complex, mapping_torus_complex, s1_cross, torus_complex, LaurentChainComplex, LaurentPoly, PolyMatrix,
};
use homgrow_core::IntMatrix;
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// `coef · x^exp`; the coefficient is a decimal string so that it is not
/// limited to a JSON number.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub exp: Vec<i64>,
    pub coef: String,
}

/// `differentials[n − 1][row][col]` lists the terms of the entry of `c_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub m: usize,
    pub top_degree: usize,
    pub dims: Vec<usize>,
    pub differentials: Vec<Vec<Vec<Vec<Term>>>>,
}

impl ComplexFile {
    pub fn from_complex(c: &LaurentChainComplex) -> Self {
        let differentials = c
            .differentials()
            .iter()
            .map(|d| {
                (0..d.rows())
                    .map(|i| {
                        (0..d.cols())
                            .map(|j| {
                                d.get(i, j)
                                    .terms()
                                    .map(|(e, a)| Term {
                                        exp: e.clone(),
                                        coef: a.to_string(),
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        ComplexFile {
            m: c.num_vars(),
            top_degree: c.top_degree(),
            dims: c.dims().to_vec(),
            differentials,
        }
    }

    pub fn to_complex(&self) -> Result<LaurentChainComplex, CliError> {
        if self.dims.len() != self.top_degree + 1 || self.differentials.len() != self.top_degree {
            return Err(CliError::Input(format!(
                "top_degree {} needs {} dims and {} differentials, got {} and {}",
                self.top_degree,
                self.top_degree + 1,
                self.top_degree,
                self.dims.len(),
                self.differentials.len()
            )));
        }
        let mut diffs = Vec::with_capacity(self.top_degree);
        for (k, d) in self.differentials.iter().enumerate() {
            let mut rows = Vec::with_capacity(d.len());
            for (i, row) in d.iter().enumerate() {
                let mut entries = Vec::with_capacity(row.len());
                for (j, terms) in row.iter().enumerate() {
                    let mut p = LaurentPoly::zero(self.m);
                    for t in terms {
                        let at = || format!("differentials[{k}][{i}][{j}]");
                        if t.exp.len() != self.m {
                            return Err(CliError::Input(format!(
                                "{}: exponent of length {} in {} variables",
                                at(),
                                t.exp.len(),
                                self.m
                            )));
                        }
                        let coef: BigInt = t
                            .coef
                            .parse()
                            .map_err(|_| CliError::Input(format!("{}: coefficient {:?} is not an integer", at(), t.coef)))?;
                        p = p.add(&LaurentPoly::monomial(t.exp.clone(), coef));
                    }
                    entries.push(p);
                }
                rows.push(entries);
            }
            let shape = (self.dims[k], self.dims[k + 1]);
            if rows.len() != shape.0 || rows.iter().any(|r| r.len() != shape.1) {
                return Err(CliError::Input(format!(
                    "differentials[{k}] must be {} × {}",
                    shape.0, shape.1
                )));
            }
            let d = if shape.0 == 0 {
                PolyMatrix::zeros(self.m, 0, shape.1)
            } else {
                PolyMatrix::from_rows(self.m, rows).map_err(CliError::Core)?
            };
            diffs.push(d);
        }
        LaurentChainComplex::new(self.m, self.dims.clone(), diffs).map_err(CliError::Core)
    }
}

/// Parses a complex file, reporting the JSON path and line of any error.
pub fn parse_complex(text: &str) -> Result<LaurentChainComplex, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: ComplexFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        CliError::Parse(format!("at {path}: {}", e.into_inner()))
    })?;
    file.to_complex()
}

pub const BUILTIN_NAMES: [&str; 5] = ["circle", "torus2", "torus3", "s1_cross", "mapping_torus:[[a,b],[c,d]]"];

/// `circle`, `torus2`, `torus3`, `s1_cross` or `mapping_torus:<matrix>` with
/// the matrix given as nested JSON rows.
pub fn builtin(name: &str) -> Result<LaurentChainComplex, CliError> {
    match name {
        "circle" => Ok(circle_complex()),
        "torus2" => Ok(torus_complex(2)),
        "torus3" => Ok(torus_complex(3)),
        "s1_cross" => Ok(s1_cross()),
        _ => {
            let Some(spec) = name.strip_prefix("mapping_torus:") else {
                return Err(CliError::Input(format!(
                    "unknown example {name:?}; available: {}",
                    BUILTIN_NAMES.join(", ")
                )));
            };
            let rows: Vec<Vec<i64>> = serde_json::from_str(spec)
                .map_err(|e| CliError::Parse(format!("mapping torus matrix {spec:?}: {e}")))?;
            if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
                return Err(CliError::Input(format!("mapping torus matrix {spec:?} is not rectangular")));
            }
            mapping_torus_complex(&IntMatrix::from_rows(&rows)).map_err(CliError::Core)
        }
    }
}
