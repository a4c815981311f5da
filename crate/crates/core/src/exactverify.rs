//! Exact certification of an instance: full rank of `M`, the spanning
//! property of both factor matrices on every bipartition, and the DFT minor
//! scan.
//!
//! Every "nonzero" verdict is either read off a nonzero modular image (which
//! proves the exact value nonzero) or obtained by exact elimination over
//! `Q(ω)`. Every "zero" verdict comes from exact elimination.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::{ConstructionParams, Nupb, Provenance};
use crate::cyclo::modular::Echelon;
use crate::cyclo::{CycMatrix, CyclotomicField};
use crate::error::{GesError, Result};
use crate::partition::{
    assemble_from_table, enumerate_bipartitions, factor_matrices_from_table, next_combination, Bipartition,
    FlatMatrix,
};
use crate::scalar::ExactScalar;

/// Outcome of an exhaustive scan over row subsets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningVerdict {
    pub holds: bool,
    pub subsets_checked: u64,
    pub failures: u64,
    /// Lexicographically first rank-deficient subset.
    pub witness: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartitionReport {
    pub side: Vec<usize>,
    pub complement: Vec<usize>,
    pub dim_s: usize,
    pub dim_sbar: usize,
    /// `K >= D_S + D_S̄ - 1`.
    pub count_condition: bool,
    pub spanning_s: SpanningVerdict,
    pub spanning_sbar: SpanningVerdict,
}

impl BipartitionReport {
    pub fn passed(&self) -> bool {
        self.count_condition && self.spanning_s.holds && self.spanning_sbar.holds
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactReport {
    pub p: u64,
    pub k: usize,
    pub dims: Vec<usize>,
    pub field_order: u64,
    pub provenance: Provenance,
    pub rank_of_m: usize,
    pub rank_full: bool,
    pub bipartitions: Vec<BipartitionReport>,
    pub passed: bool,
}

/// Row subsets of a `rows × size` matrix whose rank is below `size`.
struct SubsetScan<'a, T> {
    matrix: &'a CycMatrix<T>,
    residues: Option<&'a [u64]>,
    collect_all: bool,
    checked: u64,
    failures: u64,
    first: Option<Vec<usize>>,
    all: Vec<Vec<usize>>,
}

impl<'a, T: ExactScalar> SubsetScan<'a, T> {
    fn new(matrix: &'a CycMatrix<T>, residues: Option<&'a [u64]>, collect_all: bool) -> Self {
        SubsetScan {
            matrix,
            residues,
            collect_all,
            checked: 0,
            failures: 0,
            first: None,
            all: Vec::new(),
        }
    }

    fn run(mut self) -> Self {
        let size = self.matrix.cols();
        let rows = self.matrix.rows();
        if size == 0 {
            self.checked = 1;
            return self;
        }
        if size > rows {
            return self;
        }
        match self.residues {
            Some(res) => {
                let q = *self.matrix.field().image().modulus();
                let mut echelon = Echelon::new(q, size);
                let mut chosen = Vec::with_capacity(size);
                self.descend(res, 0, &mut chosen, &mut echelon);
            }
            None => {
                let mut combo: Vec<usize> = (0..size).collect();
                loop {
                    self.check_exact(&combo);
                    if !next_combination(&mut combo, rows, 0) {
                        break;
                    }
                }
            }
        }
        self
    }

    fn descend(&mut self, res: &[u64], start: usize, chosen: &mut Vec<usize>, echelon: &mut Echelon) {
        let size = self.matrix.cols();
        let rows = self.matrix.rows();
        let need = size - chosen.len();
        if need == 0 {
            self.checked += 1;
            return;
        }
        for r in start..=rows - need {
            chosen.push(r);
            if echelon.push(&res[r * size..(r + 1) * size]) {
                self.descend(res, r + 1, chosen, echelon);
                echelon.pop();
            } else {
                self.dependent_prefix(chosen, r + 1);
            }
            chosen.pop();
        }
    }

    /// The prefix reduced to a dependent set mod `q`. Decide exactly whether
    /// it is dependent; if so every completion fails.
    fn dependent_prefix(&mut self, prefix: &[usize], next: usize) {
        let size = self.matrix.cols();
        let rows = self.matrix.rows();
        let need = size - prefix.len();
        let prefix_rank = self.matrix.select_rows(prefix).rank_by_elimination();
        if prefix_rank < prefix.len() {
            let count = binomial((rows - next) as u64, need as u64);
            self.checked += count;
            self.failures += count;
            if self.first.is_none() || self.collect_all {
                for_each_completion(prefix, next, rows, need, |subset| {
                    if self.first.is_none() {
                        self.first = Some(subset.to_vec());
                    }
                    if self.collect_all {
                        self.all.push(subset.to_vec());
                    }
                    self.collect_all
                });
            }
        } else {
            let mut pending = Vec::new();
            for_each_completion(prefix, next, rows, need, |subset| {
                pending.push(subset.to_vec());
                true
            });
            for subset in pending {
                self.check_exact(&subset);
            }
        }
    }

    fn check_exact(&mut self, subset: &[usize]) {
        self.checked += 1;
        if self.matrix.select_rows(subset).rank_by_elimination() < subset.len() {
            self.failures += 1;
            if self.first.is_none() {
                self.first = Some(subset.to_vec());
            }
            if self.collect_all {
                self.all.push(subset.to_vec());
            }
        }
    }

    fn verdict(&self) -> SpanningVerdict {
        SpanningVerdict {
            holds: self.failures == 0 && self.matrix.cols() <= self.matrix.rows(),
            subsets_checked: self.checked,
            failures: self.failures,
            witness: self.first.clone(),
        }
    }
}

/// Calls `f` on `prefix ∪ c` for every `need`-subset `c` of `next..rows` in
/// lexicographic order while `f` returns `true`.
fn for_each_completion(prefix: &[usize], next: usize, rows: usize, need: usize, mut f: impl FnMut(&[usize]) -> bool) {
    let mut subset = prefix.to_vec();
    if need == 0 {
        f(&subset);
        return;
    }
    if rows - next < need {
        return;
    }
    let mut combo: Vec<usize> = (next..next + need).collect();
    loop {
        subset.truncate(prefix.len());
        subset.extend(&combo);
        if !f(&subset) {
            return;
        }
        if !next_combination(&mut combo, rows - next, next) {
            return;
        }
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// `rank(M) == K`, i.e. the product vectors are linearly independent.
pub fn rank_full(m: &FlatMatrix, k: usize) -> bool {
    m.matrix.rows() == k && m.matrix.rank() == k
}

/// Exact rank of `M` for an instance.
pub fn rank_of_instance(nupb: &Nupb) -> Result<usize> {
    Ok(assemble_from_table(&nupb.params, &nupb.table)?.matrix.rank())
}

/// Every `D_X`-subset of the `K` rows of `m_x` has rank `D_X`; exhaustive,
/// lexicographic, counting all failures.
pub fn spanning_property<T: ExactScalar>(m_x: &CycMatrix<T>) -> Result<SpanningVerdict> {
    if m_x.rows() < m_x.cols() {
        return Err(GesError::TooFewRows {
            rows: m_x.rows(),
            needed: m_x.cols(),
        });
    }
    let residues = m_x.residues();
    Ok(SubsetScan::new(m_x, residues.as_deref(), false).run().verdict())
}

/// Full exact certification of an instance (standard or user table).
pub fn verify_instance(nupb: &Nupb) -> Result<ExactReport> {
    let params = &nupb.params;
    let m = assemble_from_table(params, &nupb.table)?;
    let rank_of_m = m.matrix.rank();
    let rank_full = rank_of_m == params.k;
    let bipartitions = enumerate_bipartitions(params.n())
        .par_iter()
        .map(|b| verify_bipartition(params, nupb, b))
        .collect::<Result<Vec<_>>>()?;
    let passed = rank_full && bipartitions.iter().all(BipartitionReport::passed);
    Ok(ExactReport {
        p: params.p,
        k: params.k,
        dims: params.dims.clone(),
        field_order: m.matrix.field().order(),
        provenance: nupb.provenance,
        rank_of_m,
        rank_full,
        bipartitions,
        passed,
    })
}

fn verify_bipartition(params: &ConstructionParams, nupb: &Nupb, b: &Bipartition) -> Result<BipartitionReport> {
    let (ms, msbar) = factor_matrices_from_table(params, &nupb.table, b)?;
    let scan = |mx: &CycMatrix<_>| {
        spanning_property(mx).unwrap_or(SpanningVerdict {
            holds: false,
            subsets_checked: 0,
            failures: 0,
            witness: None,
        })
    };
    Ok(BipartitionReport {
        side: b.parties().to_vec(),
        complement: b.complement(),
        dim_s: ms.cols(),
        dim_sbar: msbar.cols(),
        count_condition: params.k + 1 >= ms.cols() + msbar.cols(),
        spanning_s: scan(&ms),
        spanning_sbar: scan(&msbar),
    })
}

/// Certification with the standard exponent table.
pub fn verify_all_bipartitions(params: &ConstructionParams) -> Result<ExactReport> {
    verify_instance(&Nupb::standard(params.clone())?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZeroMinor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChebotarevScan {
    pub p: u64,
    pub max_size: usize,
    pub prime: bool,
    pub minors_checked: u64,
    /// Ordered by size, then columns, then rows.
    pub witnesses: Vec<ZeroMinor>,
}

/// All square submatrices of the `p × p` DFT matrix up to `max_size`
/// (clamped to `p`) whose determinant is exactly zero.
pub fn chebotarev_scan(p: u64, max_size: usize) -> Result<ChebotarevScan> {
    if p < 2 {
        return Err(GesError::InvalidOrder(p));
    }
    let field = if crate::primes::is_prime(p) {
        CyclotomicField::prime(p)?
    } else {
        CyclotomicField::with_order(p)?
    };
    let n = p as usize;
    let max_size = max_size.min(n);
    let dft: CycMatrix<num_rational::BigRational> = CycMatrix::dft(&field, n, n);
    let all_rows: Vec<usize> = (0..n).collect();
    let mut witnesses = Vec::new();
    let mut minors_checked = 0u64;
    for size in 1..=max_size {
        let mut cols: Vec<usize> = (0..size).collect();
        loop {
            let sub = dft.submatrix(&all_rows, &cols);
            let residues = sub.residues();
            let scan = SubsetScan::new(&sub, residues.as_deref(), true).run();
            minors_checked += scan.checked;
            witnesses.extend(scan.all.into_iter().map(|rows| ZeroMinor {
                rows,
                cols: cols.clone(),
            }));
            if !next_combination(&mut cols, n, 0) {
                break;
            }
        }
    }
    Ok(ChebotarevScan {
        p,
        max_size,
        prime: field.is_prime_order(),
        minors_checked,
        witnesses,
    })
}
