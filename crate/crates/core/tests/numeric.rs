use gesforge::construct::{ConstructionParams, Nupb, Scale};
use gesforge::numcert::*;
use gesforge::partition::enumerate_bipartitions;
use gesforge::{Bipartition, CMat64};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn opts(restarts: usize) -> OptimizerOptions {
    OptimizerOptions {
        restarts,
        ..Default::default()
    }
}

fn rows_of(states: &[Vec<Complex64>]) -> CMat64 {
    DMatrix::from_fn(states.len(), states[0].len(), |i, j| states[i][j])
}

fn ket(d: usize, j: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); d];
    v[j] = Complex64::new(1.0, 0.0);
    v
}

fn nupb_rows(n: usize, d: usize, k: usize) -> CMat64 {
    dense_rows(&Nupb::standard(ConstructionParams::homogeneous(n, d, k)).unwrap().vectors)
}

/// `⟨a⊗b|G|a⊗b⟩` with `a = (cos t1, e^{i f1} sin t1)`, same for `b`.
fn qubit_pair_value(g: &CMat64, t1: f64, f1: f64, t2: f64, f2: f64) -> f64 {
    let a = [Complex64::new(t1.cos(), 0.0), Complex64::from_polar(t1.sin(), f1)];
    let b = [Complex64::new(t2.cos(), 0.0), Complex64::from_polar(t2.sin(), f2)];
    let x: Vec<Complex64> = (0..4).map(|j| a[j / 2] * b[j % 2]).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for r in 0..4 {
        for c in 0..4 {
            acc += x[r].conj() * g[(r, c)] * x[c];
        }
    }
    acc.re
}

/// Dense grid over both Bloch spheres, then repeated local zooms around the
/// best coarse points.
fn grid_minimum(g: &CMat64) -> f64 {
    use std::f64::consts::PI;
    let nt = 24;
    let nf = 32;
    let ts: Vec<f64> = (0..=nt).map(|i| PI / 2.0 * i as f64 / nt as f64).collect();
    let fs: Vec<f64> = (0..nf).map(|i| 2.0 * PI * i as f64 / nf as f64).collect();
    let mut coarse = Vec::new();
    for &t1 in &ts {
        for &f1 in &fs {
            for &t2 in &ts {
                for &f2 in &fs {
                    coarse.push((qubit_pair_value(g, t1, f1, t2, f2), [t1, f1, t2, f2]));
                }
            }
        }
    }
    coarse.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut best = f64::MAX;
    for &(v0, start) in coarse.iter().take(20) {
        let mut centre = start;
        let mut value = v0;
        let mut width = [PI / 2.0 / nt as f64, 2.0 * PI / nf as f64, PI / 2.0 / nt as f64, 2.0 * PI / nf as f64];
        for _ in 0..40 {
            let steps = 4i32;
            let mut next = centre;
            for a in -steps..=steps {
                for b in -steps..=steps {
                    for c in -steps..=steps {
                        for d in -steps..=steps {
                            let p = [
                                centre[0] + width[0] * a as f64 / steps as f64,
                                centre[1] + width[1] * b as f64 / steps as f64,
                                centre[2] + width[2] * c as f64 / steps as f64,
                                centre[3] + width[3] * d as f64 / steps as f64,
                            ];
                            let v = qubit_pair_value(g, p[0], p[1], p[2], p[3]);
                            if v < value {
                                value = v;
                                next = p;
                            }
                        }
                    }
                }
            }
            centre = next;
            for w in &mut width {
                *w *= 0.5;
            }
        }
        best = best.min(value);
    }
    best
}

fn random_psd(rank: usize, seed: u64) -> CMat64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let states: Vec<Vec<Complex64>> = (0..rank)
        .map(|_| (0..4).map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect())
        .collect();
    gram_operator(&rows_of(&states))
}

#[test]
fn alternating_minimum_matches_grid_oracle() {
    let cut = Bipartition::new(2, &[0]).unwrap();
    let mut cases = vec![gram_operator(&nupb_rows(2, 2, 3)), gram_operator(&rows_of(&[ket(4, 0), ket(4, 1)]))];
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..2 {
        let h = (0..2)
            .map(|_| {
                (0..2)
                    .map(|_| Scale::rational(BigRational::new(rng.random_range(1..9).into(), rng.random_range(1..9).into())))
                    .collect()
            })
            .collect();
        let params = ConstructionParams::homogeneous(2, 2, 3).with_scales(h);
        cases.push(gram_operator(&dense_rows(&Nupb::standard(params).unwrap().vectors)));
    }
    for (rank, seed) in [(1, 1), (2, 2), (3, 3), (3, 4)] {
        cases.push(random_psd(rank, seed));
    }
    for (idx, g) in cases.iter().enumerate() {
        let alt = min_biproduct_value(g, &[2, 2], &cut, &opts(50)).unwrap().value;
        let oracle = grid_minimum(g);
        assert!((alt - oracle).abs() < 1e-6, "case {idx}: alternating {alt}, grid {oracle}");
    }
}

#[test]
fn descent_is_monotone() {
    let g = gram_operator(&nupb_rows(3, 2, 5));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for b in enumerate_bipartitions(3) {
        let split = b.split(&[2, 2, 2]);
        let op = BipartiteOperator::new(&g, &split);
        for _ in 0..10 {
            let init = random_unit(op.dim_sbar, &mut rng);
            let run = alternating_run(&op, init, Extremum::Min, 500, 1e-12);
            for w in run.values.windows(2) {
                assert!(w[1] <= w[0] + 1e-13, "{b}: {} then {}", w[0], w[1]);
            }
        }
    }
}

#[test]
fn ascent_is_monotone() {
    let rows = nupb_rows(2, 3, 5);
    let basis = ges_basis(&rows, &[3, 3], Some(5)).unwrap();
    let split = Bipartition::new(2, &[0]).unwrap().split(&[3, 3]);
    let op = BipartiteOperator::new(&basis.projector(), &split);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let run = alternating_run(&op, random_unit(3, &mut rng), Extremum::Max, 500, 1e-12);
    for w in run.values.windows(2) {
        assert!(w[1] >= w[0] - 1e-13);
    }
}

#[test]
fn three_qubit_instance_passes_everywhere() {
    let rows = nupb_rows(3, 2, 5);
    let cert = certify_ges_numeric(&rows, &[2, 2, 2], &opts(50)).unwrap();
    assert_eq!(cert.bipartitions.len(), 3);
    assert!(cert.passed);
    let basis = ges_basis(&rows, &[2, 2, 2], Some(5)).unwrap();
    assert_eq!(basis.dim(), 3);
    for b in enumerate_bipartitions(3) {
        let over = max_product_overlap(&basis, &b, &opts(50)).unwrap();
        assert!(over.value < 1.0 - 1e-6);
    }
}

#[test]
fn witness_is_checked_directly() {
    let rows = nupb_rows(3, 2, 5);
    let g = gram_operator(&rows);
    for b in enumerate_bipartitions(3) {
        let s = min_biproduct_value(&g, &[2, 2, 2], &b, &opts(20)).unwrap();
        let x = &s.product;
        assert!((x.norm() - 1.0).abs() < 1e-12);
        let direct: f64 = (0..rows.nrows())
            .map(|i| {
                let psi = rows.row(i).transpose();
                let psi = psi.unscale(psi.norm());
                psi.dotc(x).norm_sqr()
            })
            .sum();
        assert!((direct - s.value).abs() < 1e-12);
    }
}

#[test]
fn duality_on_positive_and_negative_controls() {
    let positive = nupb_rows(2, 3, 5);
    let negative = rows_of(&[ket(8, 0), ket(8, 1), ket(8, 2), ket(8, 3)]);
    for (rows, dims, is_ges) in [(positive, vec![3, 3], true), (negative, vec![2, 2, 2], false)] {
        let g = gram_operator(&rows);
        let basis = ges_basis(&rows, &dims, Some(rows.nrows())).unwrap();
        for b in enumerate_bipartitions(dims.len()) {
            let lo = min_biproduct_value(&g, &dims, &b, &opts(30)).unwrap().value;
            let hi = max_product_overlap(&basis, &b, &opts(30)).unwrap().value;
            assert_eq!(lo < 1e-10, hi > 1.0 - 1e-10, "{b}: min {lo}, overlap {hi}");
            assert_eq!(lo > 1e-6, is_ges);
        }
    }
}

#[test]
fn overlap_examples() {
    let ghz = {
        let mut v = DVector::zeros(8);
        v[0] = Complex64::new(0.5f64.sqrt(), 0.0);
        v[7] = Complex64::new(0.5f64.sqrt(), 0.0);
        v
    };
    let ghz_rows = rows_of(&[ghz.iter().cloned().collect()]);
    // the GHZ line is the orthocomplement of its own orthocomplement
    let complement = ges_basis(&ghz_rows, &[2, 2, 2], Some(1)).unwrap();
    let line = ges_basis(&complement.columns.adjoint(), &[2, 2, 2], Some(7)).unwrap();
    assert_eq!(line.dim(), 1);
    for b in enumerate_bipartitions(3) {
        let over = max_product_overlap(&line, &b, &opts(50)).unwrap().value;
        let sc = schmidt_coefficients(&ghz, &[2, 2, 2], &b);
        assert!((over - sc[0] * sc[0]).abs() < 1e-6);
        assert!((over - 0.5).abs() < 1e-6);
    }
    let with_000 = rows_of(&[ket(8, 1), ket(8, 2), ket(8, 4)]);
    let basis = ges_basis(&with_000, &[2, 2, 2], None).unwrap();
    for b in enumerate_bipartitions(3) {
        let over = max_product_overlap(&basis, &b, &opts(20)).unwrap().value;
        assert!((over - 1.0).abs() < 1e-10);
    }
}

#[test]
fn sampled_states_are_entangled_across_every_cut() {
    let rows = nupb_rows(3, 2, 5);
    let basis = ges_basis(&rows, &[2, 2, 2], Some(5)).unwrap();
    let mut smallest = f64::MAX;
    for seed in 0..100 {
        let x = sample_ges_state(&basis, seed);
        assert!((x.norm() - 1.0).abs() < 1e-12);
        for b in enumerate_bipartitions(3) {
            let sc = schmidt_coefficients(&x, &[2, 2, 2], &b);
            let total: f64 = sc.iter().map(|s| s * s).sum();
            assert!((total - 1.0).abs() < 1e-10);
            assert!(sc.windows(2).all(|w| w[0] >= w[1]));
            smallest = smallest.min(sc[1]);
        }
    }
    assert!(smallest > 1e-8, "{smallest}");
}

#[test]
fn heterogeneous_instance() {
    let params = ConstructionParams::new(vec![2, 3], 4, None);
    let nupb = Nupb::standard(params).unwrap();
    let rows: CMat64 = dense_rows(&nupb.vectors);
    let basis = ges_basis(&rows, &[2, 3], Some(4)).unwrap();
    assert_eq!(basis.dim(), 2);
    assert!(basis.residual < 1e-10);
    let cert = certify_ges_numeric(&rows, &[2, 3], &opts(50)).unwrap();
    assert!(cert.passed);
}
