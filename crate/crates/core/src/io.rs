//! JSON documents for vectors and bases, and scale-factor parsing.
//!
//! Exponents and rationals travel as decimal strings; complex floats as
//! separate `re`/`im` arrays.

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::construct::{ConstructionParams, ExponentTable, Nupb, Provenance, Scale, ScaleTable};
use crate::error::{GesError, Result};
use crate::numcert::{GesBasis, ReIm};
use crate::scalar::{parse_rational, Real};

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamsDoc {
    pub dims: Vec<usize>,
    pub k: usize,
    pub p: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VectorsDocument {
    pub schema_version: u32,
    pub kind: String,
    pub tool_version: String,
    pub params: ParamsDoc,
    pub provenance: Provenance,
    /// `exponent_table[i][m][s]`.
    pub exponent_table: Vec<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<Vec<Value>>>,
    /// Local amplitudes per vector and party; ignored on load.
    pub amplitudes: Vec<Vec<ReIm>>,
    pub ges_dimension: usize,
    pub maximal_ges_dimension: usize,
    pub maximal: bool,
}

impl VectorsDocument {
    pub fn from_nupb(nupb: &Nupb) -> Self {
        let params = &nupb.params;
        let exponent_table = nupb
            .table
            .0
            .iter()
            .map(|parties| parties.iter().map(|e| e.iter().map(u64::to_string).collect()).collect())
            .collect();
        let h = params
            .h
            .as_ref()
            .map(|h| h.iter().map(|row| row.iter().map(scale_to_json).collect()).collect());
        let amplitudes = nupb
            .vectors
            .iter()
            .map(|v| {
                v.locals
                    .iter()
                    .map(|l| ReIm {
                        re: l.amplitudes.iter().map(|z| z.re).collect(),
                        im: l.amplitudes.iter().map(|z| z.im).collect(),
                    })
                    .collect()
            })
            .collect();
        VectorsDocument {
            schema_version: SCHEMA_VERSION,
            kind: "vectors".into(),
            tool_version: TOOL_VERSION.into(),
            params: ParamsDoc {
                dims: params.dims.clone(),
                k: params.k,
                p: params.p,
            },
            provenance: nupb.provenance,
            exponent_table,
            h,
            amplitudes,
            ges_dimension: params.ges_dimension(),
            maximal_ges_dimension: params.maximal_ges_dimension(),
            maximal: params.is_maximal(),
        }
    }

    /// Rebuilds the instance from the exponent table; provenance is
    /// re-derived rather than trusted.
    pub fn to_nupb(&self) -> Result<Nupb> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(GesError::InvalidTable(format!("unsupported schema version {}", self.schema_version)));
        }
        if self.exponent_table.len() != self.params.k {
            return Err(GesError::InvalidTable(format!(
                "{} vectors listed, k = {}",
                self.exponent_table.len(),
                self.params.k
            )));
        }
        let table = self
            .exponent_table
            .iter()
            .map(|parties| {
                parties
                    .iter()
                    .map(|exps| {
                        exps.iter()
                            .map(|e| {
                                e.trim()
                                    .parse::<u64>()
                                    .map_err(|_| GesError::InvalidTable(format!("bad exponent {e:?}")))
                            })
                            .collect::<Result<Vec<u64>>>()
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut params = ConstructionParams::new(self.params.dims.clone(), self.params.k, Some(self.params.p));
        if let Some(h) = &self.h {
            params = params.with_scales(parse_scale_rows(h)?);
        }
        Nupb::from_table(params, ExponentTable(table))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisDocument {
    pub schema_version: u32,
    pub kind: String,
    pub tool_version: String,
    pub dims: Vec<usize>,
    pub k: usize,
    pub dimension: usize,
    pub rank: usize,
    pub rank_certified: bool,
    pub residual: f64,
    pub orthonormality_error: f64,
    pub columns: Vec<ReIm>,
}

impl BasisDocument {
    pub fn from_basis<R: Real>(basis: &GesBasis<R>, k: usize) -> Self {
        let columns = (0..basis.dim())
            .map(|c| ReIm::from_vector(&basis.columns.column(c).into_owned()))
            .collect();
        BasisDocument {
            schema_version: SCHEMA_VERSION,
            kind: "basis".into(),
            tool_version: TOOL_VERSION.into(),
            dims: basis.dims.clone(),
            k,
            dimension: basis.dim(),
            rank: basis.rank,
            rank_certified: basis.rank_certified,
            residual: basis.residual,
            orthonormality_error: basis.orthonormality_error,
            columns,
        }
    }
}

/// `{"re": "a/b", "im": "c/d"}` for exact scales, numbers for floats.
pub fn scale_to_json(s: &Scale) -> Value {
    match s {
        Scale::Exact { re, im } => serde_json::json!({ "re": re.to_string(), "im": im.to_string() }),
        Scale::Float(z) => serde_json::json!({ "re": z.re, "im": z.im }),
    }
}

/// Accepts `"a/b"`, a number, or `{"re": .., "im": ..}` whose parts are
/// both strings (exact) or both numbers (float).
pub fn parse_scale(v: &Value) -> Result<Scale> {
    let bad = || GesError::InvalidScale(v.to_string());
    let exact = |s: &str| parse_rational(s).ok_or_else(bad);
    let scale = match v {
        Value::String(s) => Scale::rational(exact(s)?),
        Value::Number(n) => Scale::Float(Complex64::new(n.as_f64().ok_or_else(bad)?, 0.0)),
        Value::Object(map) => {
            let re = map.get("re").cloned().unwrap_or(Value::Null);
            let im = map.get("im").cloned().unwrap_or(Value::Null);
            match (&re, &im) {
                (Value::String(a), Value::String(b)) => Scale::Exact {
                    re: exact(a)?,
                    im: exact(b)?,
                },
                (Value::String(a), Value::Null) => Scale::rational(exact(a)?),
                (Value::Number(a), Value::Number(b)) => {
                    Scale::Float(Complex64::new(a.as_f64().ok_or_else(bad)?, b.as_f64().ok_or_else(bad)?))
                }
                (Value::Number(a), Value::Null) => Scale::Float(Complex64::new(a.as_f64().ok_or_else(bad)?, 0.0)),
                _ => return Err(bad()),
            }
        }
        _ => return Err(bad()),
    };
    if scale.is_zero() {
        return Err(GesError::InvalidScale(format!("{v} is zero")));
    }
    if let Scale::Float(z) = &scale {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(bad());
        }
    }
    Ok(scale)
}

pub fn parse_scale_rows(rows: &[Vec<Value>]) -> Result<ScaleTable> {
    rows.iter().map(|row| row.iter().map(parse_scale).collect()).collect()
}

/// An h file is either the bare `[[..], ..]` table or `{"h": [[..], ..]}`.
pub fn parse_scale_file(text: &str) -> Result<ScaleTable> {
    let v: Value = serde_json::from_str(text).map_err(|e| GesError::InvalidScale(e.to_string()))?;
    let table = match &v {
        Value::Object(map) => map.get("h").cloned().ok_or_else(|| GesError::InvalidScale("missing \"h\"".into()))?,
        _ => v,
    };
    let rows: Vec<Vec<Value>> =
        serde_json::from_value(table).map_err(|e| GesError::InvalidScale(format!("expected an array of arrays: {e}")))?;
    parse_scale_rows(&rows)
}

/// `true` when every scale is exact (or there are none).
pub fn scales_exact(h: Option<&ScaleTable>) -> bool {
    h.is_none_or(|h| h.iter().flatten().all(Scale::is_exact))
}

/// Unit check for an exact scale; used to skip writing a default table.
pub fn is_unit_table(h: &ScaleTable) -> bool {
    h.iter().flatten().all(|s| match s {
        Scale::Exact { re, im } => im.is_zero() && re == &num_rational::BigRational::from_integer(1.into()),
        Scale::Float(_) => false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectors_round_trip() {
        let nupb = Nupb::standard(ConstructionParams::homogeneous(3, 2, 5)).unwrap();
        let doc = VectorsDocument::from_nupb(&nupb);
        assert_eq!(doc.exponent_table[1], vec![vec!["0", "4"], vec!["0", "2"], vec!["0", "1"]]);
        let text = serde_json::to_string(&doc).unwrap();
        let back: VectorsDocument = serde_json::from_str(&text).unwrap();
        let again = back.to_nupb().unwrap();
        assert_eq!(again.table, nupb.table);
        assert_eq!(again.provenance, Provenance::Standard);
    }

    #[test]
    fn scale_forms() {
        let s = parse_scale(&serde_json::json!("3/4")).unwrap();
        assert!(s.is_rational());
        let s = parse_scale(&serde_json::json!({"re": "1", "im": "-2/3"})).unwrap();
        assert!(s.is_exact() && !s.is_rational());
        let s = parse_scale(&serde_json::json!(0.5)).unwrap();
        assert!(!s.is_exact());
        assert!(parse_scale(&serde_json::json!("0")).is_err());
        assert!(parse_scale(&serde_json::json!("1/0")).is_err());
        assert!(parse_scale(&serde_json::json!({"re": "1", "im": 2.0})).is_err());
        let t = parse_scale_file(r#"{"h": [["1", "2"], ["3", "1/2"]]}"#).unwrap();
        assert_eq!(t.len(), 2);
        assert!(scales_exact(Some(&t)));
        assert!(!is_unit_table(&t));
    }

    #[test]
    fn wrong_vector_count_rejected() {
        let nupb = Nupb::standard(ConstructionParams::homogeneous(2, 2, 3)).unwrap();
        let mut doc = VectorsDocument::from_nupb(&nupb);
        doc.exponent_table.pop();
        assert!(doc.to_nupb().is_err());
    }
}
