//! Product vectors built from rows of a prime-order DFT matrix.
//!
//! Party `m` of vector `i` carries amplitudes `h[m][s] · ω^{k[i][m][s]}` with
//! `k[i][m][s] = i · s · W_m (mod p)` and mixed-radix weight
//! `W_m = Π_{m' > m} dims[m']`. Flattening the tensor product then gives
//! `ω^{i j}`, i.e. rows `0..K` and columns `0..D` of the `p × p` DFT matrix.

use std::fmt;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{GesError, Result};
use crate::primes::{is_prime, smallest_prime_geq};

/// A nonzero per-level scale factor.
#[derive(Clone, Debug, PartialEq)]
pub enum Scale {
    /// Gaussian rational `re + i·im`.
    Exact { re: BigRational, im: BigRational },
    /// Floating point value; exact checks are unavailable for it.
    Float(Complex64),
}

impl Scale {
    pub fn one() -> Self {
        Scale::Exact {
            re: BigRational::from_integer(1.into()),
            im: BigRational::zero(),
        }
    }

    pub fn rational(re: BigRational) -> Self {
        Scale::Exact {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scale::Exact { re, im } => re.is_zero() && im.is_zero(),
            Scale::Float(z) => z.re == 0.0 && z.im == 0.0,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scale::Exact { .. })
    }

    /// Exact with vanishing imaginary part.
    pub fn is_rational(&self) -> bool {
        matches!(self, Scale::Exact { im, .. } if im.is_zero())
    }

    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scale::Exact { re, im } => Complex64::new(re.to_f64().unwrap_or(f64::NAN), im.to_f64().unwrap_or(f64::NAN)),
            Scale::Float(z) => *z,
        }
    }
}

/// `h[m][s]`, one row per party.
pub type ScaleTable = Vec<Vec<Scale>>;

#[derive(Clone, Debug, PartialEq)]
pub struct ConstructionParams {
    pub dims: Vec<usize>,
    pub k: usize,
    pub p: u64,
    pub h: Option<ScaleTable>,
}

/// A violated parameter constraint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    TooFewParties { n: usize },
    LocalDimTooSmall { party: usize, dim: usize },
    DimensionOverflow,
    NotPrime { p: u64 },
    PrimeTooSmall { p: u64, required: u64 },
    TooFewVectors { k: usize, min: usize },
    TooManyVectors { k: usize, max: usize },
    ScaleShape { detail: String },
    ZeroScale { party: usize, level: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TooFewParties { n } => write!(f, "need at least 2 parties, got {n}"),
            Violation::LocalDimTooSmall { party, dim } => {
                write!(f, "party {party} has local dimension {dim}, need at least 2")
            }
            Violation::DimensionOverflow => write!(f, "total dimension overflows"),
            Violation::NotPrime { p } => write!(f, "p = {p} is not prime"),
            Violation::PrimeTooSmall { p, required } => {
                write!(f, "p = {p} is smaller than the total dimension {required}")
            }
            Violation::TooFewVectors { k, min } => {
                write!(f, "K = {k} is below the minimum {min} needed for every bipartition")
            }
            Violation::TooManyVectors { k, max } => {
                write!(f, "K = {k} exceeds {max}; the orthocomplement would be empty")
            }
            Violation::ScaleShape { detail } => write!(f, "scale table shape: {detail}"),
            Violation::ZeroScale { party, level } => {
                write!(f, "scale factor h[{party}][{level}] is zero")
            }
        }
    }
}

impl ConstructionParams {
    /// `n` parties of dimension `d`, smallest admissible prime.
    pub fn homogeneous(n: usize, d: usize, k: usize) -> Self {
        Self::new(vec![d; n], k, None)
    }

    /// Uses the smallest prime `>= Π dims` when `p` is `None`.
    pub fn new(dims: Vec<usize>, k: usize, p: Option<u64>) -> Self {
        let p = p.unwrap_or_else(|| {
            let total = checked_product(&dims).unwrap_or(u64::MAX / 2);
            smallest_prime_geq(total.max(2))
        });
        ConstructionParams { dims, k, p, h: None }
    }

    pub fn with_scales(mut self, h: ScaleTable) -> Self {
        self.h = Some(h);
        self
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    /// Total dimension `D = Π dims`.
    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    /// Mixed-radix weights `W_m = Π_{m' > m} dims[m']`.
    pub fn weights(&self) -> Vec<u64> {
        mixed_radix_weights(&self.dims)
    }

    /// Smallest `K` for which the count condition `K >= D_S + D_S̄ - 1`
    /// holds across every bipartition. Homogeneous: `d^{n-1} + d - 1`.
    pub fn min_vectors(&self) -> usize {
        let n = self.n();
        if n < 2 {
            return 0;
        }
        let total = self.total_dim();
        (1u64..(1 << (n - 1)))
            .map(|mask| {
                let ds: usize = (0..n)
                    .filter(|&m| m == 0 || mask & (1 << (m - 1)) == 0)
                    .map(|m| self.dims[m])
                    .product();
                ds + total / ds - 1
            })
            .max()
            .unwrap_or(0)
    }

    pub fn max_vectors(&self) -> usize {
        self.total_dim().saturating_sub(1)
    }

    /// Dimension `D - K` of the orthocomplement.
    pub fn ges_dimension(&self) -> usize {
        self.total_dim().saturating_sub(self.k)
    }

    /// Largest possible GES dimension; homogeneous: `(d^{n-1} - 1)(d - 1)`.
    pub fn maximal_ges_dimension(&self) -> usize {
        self.total_dim().saturating_sub(self.min_vectors())
    }

    pub fn is_maximal(&self) -> bool {
        self.ges_dimension() == self.maximal_ges_dimension()
    }

    /// Scale factor for party `m`, level `s` (one when absent).
    pub fn scale(&self, m: usize, s: usize) -> Scale {
        self.h.as_ref().map(|h| h[m][s].clone()).unwrap_or_else(Scale::one)
    }

    /// Checks every constraint and returns all violations.
    pub fn validate(&self) -> std::result::Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        let n = self.n();
        if n < 2 {
            out.push(Violation::TooFewParties { n });
        }
        for (party, &dim) in self.dims.iter().enumerate() {
            if dim < 2 {
                out.push(Violation::LocalDimTooSmall { party, dim });
            }
        }
        if !is_prime(self.p) {
            out.push(Violation::NotPrime { p: self.p });
        }
        match checked_product(&self.dims) {
            None => out.push(Violation::DimensionOverflow),
            Some(total) => {
                if self.p < total {
                    out.push(Violation::PrimeTooSmall {
                        p: self.p,
                        required: total,
                    });
                }
                if n >= 2 && self.dims.iter().all(|&d| d >= 2) {
                    let min = self.min_vectors();
                    let max = self.max_vectors();
                    if self.k < min {
                        out.push(Violation::TooFewVectors { k: self.k, min });
                    }
                    if self.k > max {
                        out.push(Violation::TooManyVectors { k: self.k, max });
                    }
                }
            }
        }
        if let Some(h) = &self.h {
            if h.len() != n {
                out.push(Violation::ScaleShape {
                    detail: format!("{} party rows for {n} parties", h.len()),
                });
            } else {
                for (party, row) in h.iter().enumerate() {
                    if row.len() != self.dims[party] {
                        out.push(Violation::ScaleShape {
                            detail: format!(
                                "party {party} has {} factors for local dimension {}",
                                row.len(),
                                self.dims[party]
                            ),
                        });
                        continue;
                    }
                    for (level, s) in row.iter().enumerate() {
                        if s.is_zero() {
                            out.push(Violation::ZeroScale { party, level });
                        }
                    }
                }
            }
        }
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    fn ensure_valid(&self) -> Result<()> {
        self.validate().map_err(GesError::InvalidParams)
    }
}

fn checked_product(dims: &[usize]) -> Option<u64> {
    dims.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d as u64))
}

pub(crate) fn mixed_radix_weights(dims: &[usize]) -> Vec<u64> {
    let mut w = vec![1u64; dims.len()];
    for m in (0..dims.len().saturating_sub(1)).rev() {
        w[m] = w[m + 1] * dims[m + 1] as u64;
    }
    w
}

/// Exponents `k[i][m][s]`, reduced mod `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentTable(pub Vec<Vec<Vec<u64>>>);

impl ExponentTable {
    pub fn get(&self, i: usize, m: usize, s: usize) -> u64 {
        self.0[i][m][s]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Checks shape against `params` and reduces entries mod `p`.
    pub fn normalized(mut self, params: &ConstructionParams) -> Result<Self> {
        if self.0.len() != params.k {
            return Err(GesError::InvalidTable(format!(
                "{} vectors, expected K = {}",
                self.0.len(),
                params.k
            )));
        }
        for (i, vector) in self.0.iter_mut().enumerate() {
            if vector.len() != params.n() {
                return Err(GesError::InvalidTable(format!(
                    "vector {i} has {} parties, expected {}",
                    vector.len(),
                    params.n()
                )));
            }
            for (m, local) in vector.iter_mut().enumerate() {
                if local.len() != params.dims[m] {
                    return Err(GesError::InvalidTable(format!(
                        "vector {i}, party {m} has {} levels, expected {}",
                        local.len(),
                        params.dims[m]
                    )));
                }
                for e in local.iter_mut() {
                    *e %= params.p;
                }
            }
        }
        Ok(self)
    }
}

/// Exponent table `k[i][m][s] = i · s · W_m mod p`.
pub fn exponent_table(params: &ConstructionParams) -> Result<ExponentTable> {
    params.ensure_valid()?;
    let weights = params.weights();
    let p = params.p as u128;
    let table = (0..params.k)
        .map(|i| {
            params
                .dims
                .iter()
                .zip(&weights)
                .map(|(&d, &w)| (0..d).map(|s| ((i as u128 * s as u128 * w as u128) % p) as u64).collect())
                .collect()
        })
        .collect();
    Ok(ExponentTable(table))
}

/// One party's factor of a product vector.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalVector {
    pub exponents: Vec<u64>,
    pub scales: Vec<Scale>,
    pub amplitudes: Vec<Complex64>,
}

/// An unnormalized fully product vector `⊗_m Σ_s h[m][s] ω^{k[m][s]} |s⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductVector {
    pub locals: Vec<LocalVector>,
}

impl ProductVector {
    pub fn new(p: u64, exponents: &[Vec<u64>], h: Option<&ScaleTable>) -> Self {
        let locals = exponents
            .iter()
            .enumerate()
            .map(|(m, exps)| {
                let scales: Vec<Scale> = (0..exps.len())
                    .map(|s| h.map(|h| h[m][s].clone()).unwrap_or_else(Scale::one))
                    .collect();
                let amplitudes = exps
                    .iter()
                    .zip(&scales)
                    .map(|(&e, h)| h.to_complex() * root_of_unity(e, p))
                    .collect();
                LocalVector {
                    exponents: exps.iter().map(|&e| e % p).collect(),
                    scales,
                    amplitudes,
                }
            })
            .collect();
        ProductVector { locals }
    }

    pub fn n(&self) -> usize {
        self.locals.len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.locals.iter().map(|l| l.amplitudes.len()).collect()
    }

    /// Coefficients in the computational basis, party 0 most significant.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(1.0, 0.0)];
        for local in &self.locals {
            out = out
                .iter()
                .flat_map(|&a| local.amplitudes.iter().map(move |&b| a * b))
                .collect();
        }
        out
    }
}

/// `exp(2πi e / p)`.
pub fn root_of_unity(e: u64, p: u64) -> Complex64 {
    let angle = 2.0 * std::f64::consts::PI * (e % p) as f64 / p as f64;
    Complex64::new(angle.cos(), angle.sin())
}

/// Where an exponent table came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// `k = i · s · W_m`.
    Standard,
    /// Any other table; certified by exhaustive checks only.
    UserSupplied,
}

/// A validated parameter set together with its exponent table and vectors.
#[derive(Clone, Debug)]
pub struct Nupb {
    pub params: ConstructionParams,
    pub table: ExponentTable,
    pub vectors: Vec<ProductVector>,
    pub provenance: Provenance,
}

impl Nupb {
    pub fn standard(params: ConstructionParams) -> Result<Self> {
        let table = exponent_table(&params)?;
        let vectors = vectors_from_table(&params, &table);
        Ok(Nupb {
            params,
            table,
            vectors,
            provenance: Provenance::Standard,
        })
    }

    /// Verify-only path for arbitrary tables.
    pub fn from_table(params: ConstructionParams, table: ExponentTable) -> Result<Self> {
        params.ensure_valid()?;
        let table = table.normalized(&params)?;
        let provenance = if exponent_table(&params)? == table {
            Provenance::Standard
        } else {
            Provenance::UserSupplied
        };
        let vectors = vectors_from_table(&params, &table);
        Ok(Nupb {
            params,
            table,
            vectors,
            provenance,
        })
    }

    /// Rows are the dense vectors.
    pub fn dense_rows(&self) -> Vec<Vec<Complex64>> {
        self.vectors.iter().map(ProductVector::to_dense).collect()
    }
}

fn vectors_from_table(params: &ConstructionParams, table: &ExponentTable) -> Vec<ProductVector> {
    table
        .0
        .iter()
        .map(|exps| ProductVector::new(params.p, exps, params.h.as_ref()))
        .collect()
}

/// The `K` product vectors for `params`.
pub fn build_nupb(params: &ConstructionParams) -> Result<Vec<ProductVector>> {
    Ok(Nupb::standard(params.clone())?.vectors)
}

/// Free-function form of [`ConstructionParams::validate`].
pub fn validate_params(params: &ConstructionParams) -> std::result::Result<(), Vec<Violation>> {
    params.validate()
}
