//! Bipartitions, mixed-radix indexing, and the exact coefficient matrices
//! `M` (rows are the product vectors) and its factor matrices `M_S`, `M_S̄`.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::construct::{mixed_radix_weights, ConstructionParams, ExponentTable, Scale};
use crate::cyclo::{CycMatrix, CycNum, CyclotomicField};
use crate::error::{GesError, Result};

/// A cut `S | S̄` of the parties `0..n`, stored with `0 ∈ S`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bipartition {
    n: usize,
    side: Vec<usize>,
}

impl Bipartition {
    /// Accepts either side of the cut.
    pub fn new(n: usize, parties: &[usize]) -> Result<Self> {
        let mut side: Vec<usize> = parties.to_vec();
        side.sort_unstable();
        side.dedup();
        if side.len() != parties.len() {
            return Err(GesError::InvalidBipartition(format!("repeated party in {parties:?}")));
        }
        if let Some(&bad) = side.iter().find(|&&m| m >= n) {
            return Err(GesError::InvalidBipartition(format!("party {bad} out of range for n = {n}")));
        }
        if side.is_empty() || side.len() == n {
            return Err(GesError::InvalidBipartition(format!(
                "side {parties:?} must be a nonempty proper subset of 0..{n}"
            )));
        }
        let mut b = Bipartition { n, side };
        if b.side[0] != 0 {
            b.side = b.complement();
        }
        Ok(b)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The side containing party 0.
    pub fn parties(&self) -> &[usize] {
        &self.side
    }

    pub fn complement(&self) -> Vec<usize> {
        (0..self.n).filter(|m| !self.side.contains(m)).collect()
    }

    pub fn split(&self, dims: &[usize]) -> Split {
        Split::new(dims, self)
    }
}

impl std::fmt::Display for Bipartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let fmt_side = |v: &[usize]| v.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{{{}}}|{{{}}}", fmt_side(&self.side), fmt_side(&self.complement()))
    }
}

/// All `2^{n-1} - 1` canonical bipartitions, ordered by size of `S` then
/// lexicographically.
pub fn enumerate_bipartitions(n: usize) -> Vec<Bipartition> {
    let mut out = Vec::new();
    for size in 1..n {
        let mut combo: Vec<usize> = (1..size).collect();
        loop {
            let mut side = vec![0];
            side.extend(&combo);
            out.push(Bipartition { n, side });
            if !next_combination(&mut combo, n - 1, 1) {
                break;
            }
        }
    }
    out
}

/// Advances `combo` (strictly increasing values in `offset..offset + universe`)
/// to its lexicographic successor; `false` when exhausted.
pub(crate) fn next_combination(combo: &mut [usize], universe: usize, offset: usize) -> bool {
    let k = combo.len();
    for pos in (0..k).rev() {
        let limit = offset + universe - (k - pos);
        if combo[pos] < limit {
            combo[pos] += 1;
            for t in pos + 1..k {
                combo[t] = combo[t - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// `j = Σ s_m W_m`, party 0 most significant.
pub fn flat_index(digits: &[usize], dims: &[usize]) -> Result<usize> {
    if digits.len() != dims.len() {
        return Err(GesError::Shape(format!("{} digits for {} parties", digits.len(), dims.len())));
    }
    let mut j = 0usize;
    for (position, (&digit, &dim)) in digits.iter().zip(dims).enumerate() {
        if digit >= dim {
            return Err(GesError::DigitOutOfRange { position, digit, dim });
        }
        j = j * dim + digit;
    }
    Ok(j)
}

/// Inverse of [`flat_index`]; `j` is taken modulo `Π dims`.
pub fn unflatten(mut j: usize, dims: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; dims.len()];
    for m in (0..dims.len()).rev() {
        digits[m] = j % dims[m];
        j /= dims[m];
    }
    digits
}

/// Index map between the full space and `H_S ⊗ H_S̄`.
#[derive(Clone, Debug)]
pub struct Split {
    pub dim_s: usize,
    pub dim_sbar: usize,
    /// `pairs[j] = (index on S, index on S̄)` for full index `j`.
    pub pairs: Vec<(usize, usize)>,
}

impl Split {
    pub fn new(dims: &[usize], b: &Bipartition) -> Self {
        let s = b.parties();
        let sbar = b.complement();
        let dims_s: Vec<usize> = s.iter().map(|&m| dims[m]).collect();
        let dims_sbar: Vec<usize> = sbar.iter().map(|&m| dims[m]).collect();
        let total: usize = dims.iter().product();
        let pairs = (0..total)
            .map(|j| {
                let digits = unflatten(j, dims);
                let ds: Vec<usize> = s.iter().map(|&m| digits[m]).collect();
                let db: Vec<usize> = sbar.iter().map(|&m| digits[m]).collect();
                (
                    flat_index(&ds, &dims_s).expect("digits in range"),
                    flat_index(&db, &dims_sbar).expect("digits in range"),
                )
            })
            .collect();
        Split {
            dim_s: dims_s.iter().product(),
            dim_sbar: dims_sbar.iter().product(),
            pairs,
        }
    }

    /// Full index of `(a, b)`.
    pub fn full_index(&self) -> Vec<usize> {
        let mut inv = vec![0; self.pairs.len()];
        for (j, &(a, b)) in self.pairs.iter().enumerate() {
            inv[a * self.dim_sbar + b] = j;
        }
        inv
    }
}

/// The exact `K × D` matrix `M` with its column index map.
#[derive(Clone, Debug)]
pub struct FlatMatrix {
    pub matrix: CycMatrix<BigRational>,
    pub dims: Vec<usize>,
}

impl FlatMatrix {
    pub fn column_digits(&self, j: usize) -> Vec<usize> {
        unflatten(j, &self.dims)
    }
}

type Gaussian = (BigRational, BigRational);

fn gaussian_mul(a: &Gaussian, b: &Gaussian) -> Gaussian {
    (
        &a.0 * &b.0 - &a.1 * &b.1,
        &a.0 * &b.1 + &a.1 * &b.0,
    )
}

fn gaussian_one() -> Gaussian {
    (BigRational::one(), BigRational::zero())
}

/// Exact field for the instance: `Q(ω_p)`, or `Q(ω_{lcm(p,4)})` when some
/// scale factor has a nonzero imaginary part. Floating scales have no
/// exact representation.
pub fn exact_field(params: &ConstructionParams) -> Result<Arc<CyclotomicField>> {
    let mut needs_i = false;
    if let Some(h) = &params.h {
        for s in h.iter().flatten() {
            match s {
                Scale::Float(_) => return Err(GesError::InexactScales),
                Scale::Exact { im, .. } if !im.is_zero() => needs_i = true,
                Scale::Exact { .. } => {}
            }
        }
    }
    if !needs_i {
        return CyclotomicField::prime(params.p);
    }
    let order = num_integer::lcm(params.p, 4);
    CyclotomicField::with_order(order)
}

struct EntryBuilder<'a> {
    field: Arc<CyclotomicField>,
    p: u64,
    table: &'a ExponentTable,
    scales: Option<Vec<Vec<Gaussian>>>,
}

impl<'a> EntryBuilder<'a> {
    fn new(params: &ConstructionParams, table: &'a ExponentTable) -> Result<Self> {
        let field = exact_field(params)?;
        let scales = match &params.h {
            None => None,
            Some(h) => Some(
                h.iter()
                    .map(|row| {
                        row.iter()
                            .map(|s| match s {
                                Scale::Exact { re, im } => Ok((re.clone(), im.clone())),
                                Scale::Float(_) => Err(GesError::InexactScales),
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        Ok(EntryBuilder {
            field,
            p: params.p,
            table,
            scales,
        })
    }

    /// Row `i` restricted to `parties` at local digits `digits`.
    fn entry(&self, i: usize, parties: &[usize], digits: &[usize]) -> CycNum<BigRational> {
        let n_field = self.field.order();
        let mut exponent = 0u64;
        let mut scale = gaussian_one();
        for (&m, &s) in parties.iter().zip(digits) {
            exponent = (exponent + self.table.get(i, m, s)) % self.p;
            if let Some(h) = &self.scales {
                scale = gaussian_mul(&scale, &h[m][s]);
            }
        }
        // ω_p = ζ^{N/p}, i = ζ^{N/4}
        let root = CycNum::root_power(&self.field, ((n_field / self.p) * exponent) as i64);
        if self.scales.is_none() {
            return root;
        }
        let mut value = CycNum::from_scalar(&self.field, scale.0);
        if !scale.1.is_zero() {
            let i_unit = CycNum::root_power(&self.field, (n_field / 4) as i64);
            value = &value + &i_unit.scale(&scale.1);
        }
        &value * &root
    }

    fn block(&self, parties: &[usize], dims: &[usize]) -> CycMatrix<BigRational> {
        let local_dims: Vec<usize> = parties.iter().map(|&m| dims[m]).collect();
        let cols: usize = local_dims.iter().product();
        CycMatrix::from_fn(&self.field, self.table.len(), cols, |i, j| {
            self.entry(i, parties, &unflatten(j, &local_dims))
        })
    }
}

/// `M[i][j] = h-product · ω^{Σ_m k[i][m][s_m]}` for an arbitrary table.
pub fn assemble_from_table(params: &ConstructionParams, table: &ExponentTable) -> Result<FlatMatrix> {
    let builder = EntryBuilder::new(params, table)?;
    let all: Vec<usize> = (0..params.n()).collect();
    Ok(FlatMatrix {
        matrix: builder.block(&all, &params.dims),
        dims: params.dims.clone(),
    })
}

/// `M` for the standard exponent table.
pub fn assemble_m(params: &ConstructionParams) -> Result<FlatMatrix> {
    let table = crate::construct::exponent_table(params)?;
    assemble_from_table(params, &table)
}

/// `(M_S, M_S̄)` for an arbitrary table.
pub fn factor_matrices_from_table(
    params: &ConstructionParams,
    table: &ExponentTable,
    b: &Bipartition,
) -> Result<(CycMatrix<BigRational>, CycMatrix<BigRational>)> {
    if b.n() != params.n() {
        return Err(GesError::InvalidBipartition(format!(
            "bipartition of {} parties for an instance with {}",
            b.n(),
            params.n()
        )));
    }
    let builder = EntryBuilder::new(params, table)?;
    Ok((
        builder.block(b.parties(), &params.dims),
        builder.block(&b.complement(), &params.dims),
    ))
}

/// `(M_S, M_S̄)` for the standard table.
pub fn factor_matrices(
    params: &ConstructionParams,
    b: &Bipartition,
) -> Result<(CycMatrix<BigRational>, CycMatrix<BigRational>)> {
    let table = crate::construct::exponent_table(params)?;
    factor_matrices_from_table(params, &table, b)
}

/// Column exponent offsets `c_S = Σ_{m ∈ S} s_m W_m` for both sides.
pub fn column_offsets(params: &ConstructionParams, b: &Bipartition) -> (Vec<u64>, Vec<u64>) {
    let weights = mixed_radix_weights(&params.dims);
    let side = |parties: &[usize]| -> Vec<u64> {
        let local: Vec<usize> = parties.iter().map(|&m| params.dims[m]).collect();
        let cols: usize = local.iter().product();
        (0..cols)
            .map(|j| {
                unflatten(j, &local)
                    .iter()
                    .zip(parties)
                    .map(|(&s, &m)| s as u64 * weights[m])
                    .sum()
            })
            .collect()
    };
    (side(b.parties()), side(&b.complement()))
}
