//! Numerical certification that the orthocomplement of a product set is a
//! genuinely entangled subspace.
//!
//! For each bipartition `S|S̄` we minimise `⟨a⊗b|G|a⊗b⟩` over unit `a`, `b`
//! with `G = Σ_i |ψ̂_i⟩⟨ψ̂_i|` built from the normalized members. The minimum
//! is zero iff some biproduct vector is orthogonal to every member. Each
//! alternating half-step fixes one side and takes the lowest eigenvector of
//! the reduced Hermitian operator on the other, so the objective never
//! increases within a run.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::ProductVector;
use crate::error::{GesError, Result};
use crate::partition::{enumerate_bipartitions, Bipartition, Split};
use crate::scalar::{real, to_f64, Real};

type CMat<R> = DMatrix<Complex<R>>;
type CVec<R> = DVector<Complex<R>>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OptimizerOptions {
    pub restarts: usize,
    pub max_sweeps: usize,
    /// Convergence when the objective changes by less than this per sweep.
    pub tol: f64,
    /// Minima above this certify a bipartition.
    pub threshold: f64,
    pub seed: u64,
}

impl Default for OptimizerOptions {
    fn default() -> Self {
        OptimizerOptions {
            restarts: 50,
            max_sweeps: 500,
            tol: 1e-12,
            threshold: 1e-6,
            seed: 0,
        }
    }
}

/// Orthonormal basis of the orthocomplement, one column per basis vector.
#[derive(Clone, Debug)]
pub struct GesBasis<R: Real> {
    pub columns: CMat<R>,
    pub dims: Vec<usize>,
    /// Numerical rank of the member set.
    pub rank: usize,
    /// `max_{i,c} |⟨ψ_i|b_c⟩|`.
    pub residual: f64,
    /// `max |B†B - I|`.
    pub orthonormality_error: f64,
    /// Whether `rank` was checked against an exact rank.
    pub rank_certified: bool,
}

impl<R: Real> GesBasis<R> {
    pub fn dim(&self) -> usize {
        self.columns.ncols()
    }

    pub fn total_dim(&self) -> usize {
        self.columns.nrows()
    }

    /// Projector `B B†` onto the subspace.
    pub fn projector(&self) -> CMat<R> {
        &self.columns * self.columns.adjoint()
    }
}

/// Dense `K × D` matrix whose rows are the members' coefficients.
pub fn dense_rows<R: Real>(vectors: &[ProductVector]) -> CMat<R> {
    let dense: Vec<Vec<Complex<f64>>> = vectors.iter().map(ProductVector::to_dense).collect();
    let d = dense.first().map_or(0, Vec::len);
    DMatrix::from_fn(dense.len(), d, |i, j| {
        let z = dense[i][j];
        Complex::new(real(z.re), real(z.im))
    })
}

/// `G = Σ_i |ψ̂_i⟩⟨ψ̂_i|` over the normalized rows.
pub fn gram_operator<R: Real>(rows: &CMat<R>) -> CMat<R> {
    let d = rows.ncols();
    let mut g = DMatrix::zeros(d, d);
    for i in 0..rows.nrows() {
        let psi: CVec<R> = rows.row(i).transpose();
        let norm = psi.norm();
        if norm > R::zero() {
            let psi = psi.unscale(norm);
            g += &psi * psi.adjoint();
        }
    }
    g
}

fn max_abs<R: Real>(m: &CMat<R>) -> f64 {
    m.iter().map(|z| to_f64(nalgebra::ComplexField::modulus(*z))).fold(0.0, f64::max)
}

/// Orthonormal null-space basis of the members (rows of `rows`).
///
/// With `exact_rank` given, a disagreeing numerical rank is an error.
pub fn ges_basis<R: Real>(rows: &CMat<R>, dims: &[usize], exact_rank: Option<usize>) -> Result<GesBasis<R>> {
    let d = rows.ncols();
    let total: usize = dims.iter().product();
    if total != d {
        return Err(GesError::Shape(format!("{d} columns for local dimensions {dims:?}")));
    }
    // x ⊥ ψ_i  ⇔  conj(rows) · x = 0
    let a = rows.map(|z| z.conj());
    let (rank, row_space) = if a.nrows() == 0 {
        (0, DMatrix::zeros(d, 0))
    } else {
        let svd = a.clone().svd(false, true);
        let v_t = svd.v_t.expect("requested V^T");
        let sigma_max = svd.singular_values.iter().cloned().fold(R::zero(), R::max);
        let cutoff = sigma_max * real::<R>(1e-9);
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&i| svd.singular_values[i] > cutoff)
            .collect();
        let v = v_t.adjoint();
        let cols: Vec<CVec<R>> = keep.iter().map(|&i| v.column(i).into_owned()).collect();
        let basis = if cols.is_empty() {
            DMatrix::zeros(d, 0)
        } else {
            DMatrix::from_columns(&cols)
        };
        (keep.len(), basis)
    };
    if let Some(exact) = exact_rank {
        if exact != rank {
            return Err(GesError::RankMismatch { numeric: rank, exact });
        }
    }
    let complement_projector = DMatrix::identity(d, d) - &row_space * row_space.adjoint();
    let eig = hermitian(complement_projector).symmetric_eigen();
    let half = real::<R>(0.5);
    let cols: Vec<CVec<R>> = (0..d)
        .filter(|&i| eig.eigenvalues[i] > half)
        .map(|i| eig.eigenvectors.column(i).into_owned())
        .collect();
    let columns = if cols.is_empty() {
        DMatrix::zeros(d, 0)
    } else {
        DMatrix::from_columns(&cols)
    };
    let residual = max_abs(&(&a * &columns));
    let gram = columns.adjoint() * &columns;
    let orthonormality_error = max_abs(&(gram - DMatrix::identity(columns.ncols(), columns.ncols())));
    Ok(GesBasis {
        columns,
        dims: dims.to_vec(),
        rank,
        residual,
        orthonormality_error,
        rank_certified: exact_rank.is_some(),
    })
}

fn hermitian<R: Real>(m: CMat<R>) -> CMat<R> {
    let adj = m.adjoint();
    (m + adj).scale(real(0.5))
}

fn check_hermitian<R: Real>(op: &CMat<R>) -> Result<()> {
    if !op.is_square() {
        return Err(GesError::NotSquare {
            rows: op.nrows(),
            cols: op.ncols(),
        });
    }
    let asym = max_abs(&(op - op.adjoint()));
    if asym > 1e-10 * max_abs(op).max(1.0) {
        return Err(GesError::NotHermitian(asym));
    }
    Ok(())
}

/// Which extremum of the biproduct expectation value to seek.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extremum {
    Min,
    Max,
}

impl Extremum {
    fn better<R: Real>(self, a: R, b: R) -> bool {
        match self {
            Extremum::Min => a < b,
            Extremum::Max => a > b,
        }
    }
}

/// An operator re-indexed to `H_S ⊗ H_S̄` (row `a·D_S̄ + b`).
#[derive(Clone, Debug)]
pub struct BipartiteOperator<R: Real> {
    pub dim_s: usize,
    pub dim_sbar: usize,
    pub matrix: CMat<R>,
}

impl<R: Real> BipartiteOperator<R> {
    pub fn new(op: &CMat<R>, split: &Split) -> Self {
        let inv = split.full_index();
        let d = op.nrows();
        let matrix = DMatrix::from_fn(d, d, |x, y| op[(inv[x], inv[y])]);
        BipartiteOperator {
            dim_s: split.dim_s,
            dim_sbar: split.dim_sbar,
            matrix,
        }
    }

    /// `(I ⊗ ⟨b|) O (I ⊗ |b⟩)` on `H_S`.
    pub fn reduce_on_s(&self, b: &CVec<R>) -> CMat<R> {
        let (ds, db) = (self.dim_s, self.dim_sbar);
        let mut out = DMatrix::zeros(ds, ds);
        for x in 0..ds {
            for y in 0..ds {
                let mut acc = Complex::new(R::zero(), R::zero());
                for u in 0..db {
                    let bu = b[u].conj();
                    for v in 0..db {
                        acc += bu * self.matrix[(x * db + u, y * db + v)] * b[v];
                    }
                }
                out[(x, y)] = acc;
            }
        }
        hermitian(out)
    }

    /// `(⟨a| ⊗ I) O (|a⟩ ⊗ I)` on `H_S̄`.
    pub fn reduce_on_sbar(&self, a: &CVec<R>) -> CMat<R> {
        let (ds, db) = (self.dim_s, self.dim_sbar);
        let mut out = DMatrix::zeros(db, db);
        for x in 0..ds {
            let ax = a[x].conj();
            for y in 0..ds {
                let w = ax * a[y];
                for u in 0..db {
                    for v in 0..db {
                        out[(u, v)] += w * self.matrix[(x * db + u, y * db + v)];
                    }
                }
            }
        }
        hermitian(out)
    }

    pub fn expectation(&self, a: &CVec<R>, b: &CVec<R>) -> R {
        let x = a.kronecker(b);
        (x.adjoint() * &self.matrix * &x)[(0, 0)].re
    }
}

fn extremal_eigvec<R: Real>(h: CMat<R>, which: Extremum) -> (R, CVec<R>) {
    let eig = h.symmetric_eigen();
    let mut best = 0;
    for i in 1..eig.eigenvalues.len() {
        if which.better(eig.eigenvalues[i], eig.eigenvalues[best]) {
            best = i;
        }
    }
    (eig.eigenvalues[best], eig.eigenvectors.column(best).into_owned())
}

/// Objective history and final state of one alternating run.
#[derive(Clone, Debug)]
pub struct RunTrace<R: Real> {
    /// Objective after every half-step.
    pub values: Vec<R>,
    pub a: CVec<R>,
    pub b: CVec<R>,
    pub sweeps: usize,
    pub converged: bool,
}

impl<R: Real> RunTrace<R> {
    pub fn value(&self) -> R {
        *self.values.last().expect("at least one half-step")
    }
}

/// Alternating eigen-steps from the starting `H_S̄` state `init_b`.
pub fn alternating_run<R: Real>(
    op: &BipartiteOperator<R>,
    init_b: CVec<R>,
    which: Extremum,
    max_sweeps: usize,
    tol: f64,
) -> RunTrace<R> {
    let mut b = init_b;
    let mut a = CVec::zeros(op.dim_s);
    let mut values = Vec::new();
    let mut previous: Option<R> = None;
    let tol = real::<R>(tol);
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < max_sweeps.max(1) {
        let (_, new_a) = extremal_eigvec(op.reduce_on_s(&b), which);
        a = new_a;
        values.push(op.expectation(&a, &b));
        let (_, new_b) = extremal_eigvec(op.reduce_on_sbar(&a), which);
        b = new_b;
        let v = op.expectation(&a, &b);
        values.push(v);
        sweeps += 1;
        if let Some(prev) = previous {
            if (v - prev).abs() < tol {
                converged = true;
                break;
            }
        }
        previous = Some(v);
    }
    RunTrace {
        values,
        a,
        b,
        sweeps,
        converged,
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Per-restart seed from the global seed, a stream id and a counter.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed ^ splitmix64(stream)) ^ index)
}

/// Unit vector with i.i.d. complex Gaussian entries.
pub fn random_unit<R: Real>(dim: usize, rng: &mut impl Rng) -> CVec<R> {
    loop {
        let v = CVec::from_fn(dim, |_, _| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex::new(real(re), real(im))
        });
        let n = v.norm();
        if n > R::zero() {
            return v.unscale(n);
        }
    }
}

/// Best result over all restarts.
#[derive(Clone, Debug)]
pub struct BiproductSearch<R: Real> {
    pub value: R,
    pub state_s: CVec<R>,
    pub state_sbar: CVec<R>,
    /// `state_s ⊗ state_sbar` in the original party order.
    pub product: CVec<R>,
    pub restarts: usize,
    pub best_restart: usize,
    pub total_sweeps: usize,
    pub converged_restarts: usize,
}

fn search<R: Real>(
    op: &CMat<R>,
    dims: &[usize],
    b: &Bipartition,
    opts: &OptimizerOptions,
    which: Extremum,
    stream: u64,
) -> Result<BiproductSearch<R>> {
    check_hermitian(op)?;
    let total: usize = dims.iter().product();
    if op.nrows() != total {
        return Err(GesError::Shape(format!("operator of size {} for local dimensions {dims:?}", op.nrows())));
    }
    if b.n() != dims.len() {
        return Err(GesError::InvalidBipartition(format!("{} parties, expected {}", b.n(), dims.len())));
    }
    let split = b.split(dims);
    let bop = BipartiteOperator::new(op, &split);
    let restarts = opts.restarts.max(1);
    let runs: Vec<RunTrace<R>> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(opts.seed, stream, r as u64));
            let init = random_unit(bop.dim_sbar, &mut rng);
            alternating_run(&bop, init, which, opts.max_sweeps, opts.tol)
        })
        .collect();
    let mut best = 0;
    for (i, run) in runs.iter().enumerate().skip(1) {
        if which.better(run.value(), runs[best].value()) {
            best = i;
        }
    }
    let run = &runs[best];
    let product = CVec::from_fn(total, |j, _| {
        let (x, u) = split.pairs[j];
        run.a[x] * run.b[u]
    });
    Ok(BiproductSearch {
        value: run.value(),
        state_s: run.a.clone(),
        state_sbar: run.b.clone(),
        product,
        restarts,
        best_restart: best,
        total_sweeps: runs.iter().map(|r| r.sweeps).sum(),
        converged_restarts: runs.iter().filter(|r| r.converged).count(),
    })
}

/// Multi-start minimum of `⟨a⊗b|G|a⊗b⟩` across `b`.
pub fn min_biproduct_value<R: Real>(
    g: &CMat<R>,
    dims: &[usize],
    b: &Bipartition,
    opts: &OptimizerOptions,
) -> Result<BiproductSearch<R>> {
    search(g, dims, b, opts, Extremum::Min, stream_id(b))
}

/// Multi-start maximum of `⟨a⊗b|P|a⊗b⟩` with `P` the projector onto the
/// subspace; below one iff the subspace holds no biproduct vector across `b`.
pub fn max_product_overlap<R: Real>(
    basis: &GesBasis<R>,
    b: &Bipartition,
    opts: &OptimizerOptions,
) -> Result<BiproductSearch<R>> {
    search(&basis.projector(), &basis.dims, b, opts, Extremum::Max, stream_id(b) ^ 0xdead_beef)
}

fn stream_id(b: &Bipartition) -> u64 {
    b.parties().iter().fold(0u64, |acc, &m| acc | (1 << m))
}

/// Minimum of `⟨x|G|x⟩` over fully product unit `x`, by cycling through the
/// parties. Diagnostic only.
pub fn min_fully_product_value<R: Real>(g: &CMat<R>, dims: &[usize], opts: &OptimizerOptions) -> Result<R> {
    check_hermitian(g)?;
    let n = dims.len();
    let total: usize = dims.iter().product();
    let splits: Vec<(Split, bool)> = (0..n)
        .map(|m| {
            let b = Bipartition::new(n, &[m]).expect("single party is a proper subset for n >= 2");
            let on_s = b.parties() == [m];
            (b.split(dims), on_s)
        })
        .collect();
    let ops: Vec<BipartiteOperator<R>> = splits.iter().map(|(s, _)| BipartiteOperator::new(g, s)).collect();
    let mut best: Option<R> = None;
    for r in 0..opts.restarts.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(opts.seed, u64::MAX, r as u64));
        let mut locals: Vec<CVec<R>> = dims.iter().map(|&d| random_unit(d, &mut rng)).collect();
        let mut prev: Option<R> = None;
        let mut value = R::zero();
        for _ in 0..opts.max_sweeps.max(1) {
            for m in 0..n {
                let rest = kron_except(&locals, m);
                let (split_op, on_s) = (&ops[m], splits[m].1);
                let reduced = if on_s {
                    split_op.reduce_on_s(&rest)
                } else {
                    split_op.reduce_on_sbar(&rest)
                };
                let (v, vec) = extremal_eigvec(reduced, Extremum::Min);
                locals[m] = vec;
                value = v;
            }
            if let Some(p) = prev {
                if (value - p).abs() < real(opts.tol) {
                    break;
                }
            }
            prev = Some(value);
        }
        debug_assert_eq!(kron_all(&locals).len(), total);
        if best.is_none_or(|b| value < b) {
            best = Some(value);
        }
    }
    Ok(best.expect("at least one restart"))
}

fn kron_except<R: Real>(locals: &[CVec<R>], skip: usize) -> CVec<R> {
    let mut out = CVec::from_element(1, Complex::new(R::one(), R::zero()));
    for (m, v) in locals.iter().enumerate() {
        if m != skip {
            out = out.kronecker(v);
        }
    }
    out
}

fn kron_all<R: Real>(locals: &[CVec<R>]) -> CVec<R> {
    kron_except(locals, usize::MAX)
}

/// Complex vector as parallel real/imaginary arrays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReIm {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl ReIm {
    pub fn from_vector<R: Real>(v: &CVec<R>) -> Self {
        ReIm {
            re: v.iter().map(|z| to_f64(z.re)).collect(),
            im: v.iter().map(|z| to_f64(z.im)).collect(),
        }
    }

    pub fn to_vector<R: Real>(&self) -> CVec<R> {
        CVec::from_iterator(
            self.re.len(),
            self.re.iter().zip(&self.im).map(|(&r, &i)| Complex::new(real(r), real(i))),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericBipartition {
    pub side: Vec<usize>,
    pub complement: Vec<usize>,
    pub min_biproduct_value: f64,
    pub restarts: usize,
    pub best_restart: usize,
    pub total_sweeps: usize,
    pub converged_restarts: usize,
    pub argmin_s: ReIm,
    pub argmin_sbar: ReIm,
    pub witness: ReIm,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericCertificate {
    pub dims: Vec<usize>,
    pub members: usize,
    pub options: OptimizerOptions,
    pub bipartitions: Vec<NumericBipartition>,
    pub passed: bool,
}

/// Runs the biproduct minimisation on every canonical bipartition.
pub fn certify_ges_numeric<R: Real>(rows: &CMat<R>, dims: &[usize], opts: &OptimizerOptions) -> Result<NumericCertificate> {
    let g = gram_operator(rows);
    let bipartitions = enumerate_bipartitions(dims.len())
        .iter()
        .map(|b| {
            let s = min_biproduct_value(&g, dims, b, opts)?;
            let value = to_f64(s.value).max(0.0);
            Ok(NumericBipartition {
                side: b.parties().to_vec(),
                complement: b.complement(),
                min_biproduct_value: value,
                restarts: s.restarts,
                best_restart: s.best_restart,
                total_sweeps: s.total_sweeps,
                converged_restarts: s.converged_restarts,
                argmin_s: ReIm::from_vector(&s.state_s),
                argmin_sbar: ReIm::from_vector(&s.state_sbar),
                witness: ReIm::from_vector(&s.product),
                passed: value > opts.threshold,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let passed = bipartitions.iter().all(|b| b.passed);
    Ok(NumericCertificate {
        dims: dims.to_vec(),
        members: rows.nrows(),
        options: opts.clone(),
        bipartitions,
        passed,
    })
}

/// Random unit state in the subspace (isotropic complex Gaussian coefficients).
pub fn sample_ges_state<R: Real>(basis: &GesBasis<R>, seed: u64) -> CVec<R> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = random_unit(basis.dim(), &mut rng);
    let v = &basis.columns * coeffs;
    let n = v.norm();
    v.unscale(n)
}

/// Schmidt coefficients of `state` across `b`, descending.
pub fn schmidt_coefficients<R: Real>(state: &CVec<R>, dims: &[usize], b: &Bipartition) -> Vec<R> {
    let split = b.split(dims);
    let mut m = DMatrix::zeros(split.dim_s, split.dim_sbar);
    for (j, &(x, u)) in split.pairs.iter().enumerate() {
        m[(x, u)] = state[j];
    }
    let mut sv: Vec<R> = m.singular_values().iter().cloned().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    sv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{ConstructionParams, Nupb};

    fn basis_state(d: usize, j: usize) -> CVec<f64> {
        let mut v = CVec::zeros(d);
        v[j] = Complex::new(1.0, 0.0);
        v
    }

    fn ghz3() -> CVec<f64> {
        let mut v = CVec::zeros(8);
        v[0] = Complex::new(0.5f64.sqrt(), 0.0);
        v[7] = Complex::new(0.5f64.sqrt(), 0.0);
        v
    }

    fn quick() -> OptimizerOptions {
        OptimizerOptions {
            restarts: 10,
            ..Default::default()
        }
    }

    #[test]
    fn identity_gives_one() {
        let g = DMatrix::<Complex<f64>>::identity(8, 8);
        for b in enumerate_bipartitions(3) {
            let s = min_biproduct_value(&g, &[2, 2, 2], &b, &quick()).unwrap();
            assert!((s.value - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut g = DMatrix::<Complex<f64>>::identity(4, 4);
        g[(0, 1)] = Complex::new(0.3, 0.0);
        let b = Bipartition::new(2, &[0]).unwrap();
        assert!(matches!(min_biproduct_value(&g, &[2, 2], &b, &quick()), Err(GesError::NotHermitian(_))));
    }

    #[test]
    fn three_qubit_basis() {
        let nupb = Nupb::standard(ConstructionParams::homogeneous(3, 2, 5)).unwrap();
        let rows: CMat<f64> = dense_rows(&nupb.vectors);
        let basis = ges_basis(&rows, &[2, 2, 2], Some(5)).unwrap();
        assert_eq!(basis.dim(), 3);
        assert!(basis.residual < 1e-10);
        assert!(basis.orthonormality_error < 1e-10);
        assert!(ges_basis(&rows, &[2, 2, 2], Some(4)).is_err());
    }

    #[test]
    fn one_dimensional_complement() {
        let nupb = Nupb::standard(ConstructionParams::homogeneous(3, 2, 7)).unwrap();
        let rows: CMat<f64> = dense_rows(&nupb.vectors);
        let basis = ges_basis(&rows, &[2, 2, 2], None).unwrap();
        assert_eq!(basis.dim(), 1);
        assert!(!basis.rank_certified);
    }

    #[test]
    fn ghz_schmidt_and_overlap() {
        let ghz = ghz3();
        let b = Bipartition::new(3, &[0]).unwrap();
        let sc = schmidt_coefficients(&ghz, &[2, 2, 2], &b);
        assert!((sc[0] - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((sc[1] - 0.5f64.sqrt()).abs() < 1e-12);
        let basis = GesBasis {
            columns: DMatrix::from_columns(&[ghz]),
            dims: vec![2, 2, 2],
            rank: 7,
            residual: 0.0,
            orthonormality_error: 0.0,
            rank_certified: false,
        };
        for b in enumerate_bipartitions(3) {
            let s = max_product_overlap(&basis, &b, &quick()).unwrap();
            assert!((s.value - 0.5).abs() < 1e-9, "{b}: {}", s.value);
        }
    }

    #[test]
    fn extendible_set_reaches_zero() {
        let members: Vec<CVec<f64>> = (0..4).map(|j| basis_state(8, j)).collect();
        let rows = DMatrix::from_rows(&members.iter().map(|v| v.transpose()).collect::<Vec<_>>());
        let g = gram_operator(&rows);
        let b = Bipartition::new(3, &[0]).unwrap();
        let s = min_biproduct_value(&g, &[2, 2, 2], &b, &quick()).unwrap();
        assert!(s.value < 1e-10);
        assert!(s.state_s[0].norm() < 1e-6);
        let cert = certify_ges_numeric(&rows, &[2, 2, 2], &quick()).unwrap();
        assert!(!cert.passed);
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let nupb = Nupb::standard(ConstructionParams::homogeneous(2, 3, 5)).unwrap();
        let rows: CMat<f64> = dense_rows(&nupb.vectors);
        let opts = OptimizerOptions {
            restarts: 8,
            seed: 42,
            ..Default::default()
        };
        let a = certify_ges_numeric(&rows, &[3, 3], &opts).unwrap();
        let b = certify_ges_numeric(&rows, &[3, 3], &opts).unwrap();
        assert_eq!(a, b);
        assert!(a.passed);
    }

    #[test]
    fn fully_product_diagnostic() {
        let nupb = Nupb::standard(ConstructionParams::homogeneous(3, 2, 5)).unwrap();
        let rows: CMat<f64> = dense_rows(&nupb.vectors);
        let g = gram_operator(&rows);
        let full = min_fully_product_value(&g, &[2, 2, 2], &quick()).unwrap();
        // fully product states are biproduct across every cut
        for b in enumerate_bipartitions(3) {
            let s = min_biproduct_value(&g, &[2, 2, 2], &b, &quick()).unwrap();
            assert!(full >= s.value - 1e-9);
        }
        assert!(full > 1e-6);
    }

    #[test]
    fn single_precision_path() {
        let nupb = Nupb::standard(ConstructionParams::homogeneous(2, 2, 3)).unwrap();
        let rows: CMat<f32> = dense_rows(&nupb.vectors);
        let basis = ges_basis(&rows, &[2, 2], Some(3)).unwrap();
        assert_eq!(basis.dim(), 1);
        assert!(basis.residual < 1e-5);
        let cert = certify_ges_numeric(&rows, &[2, 2], &quick()).unwrap();
        assert!(cert.passed);
    }
}
