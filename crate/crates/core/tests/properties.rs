use std::sync::Arc;

use chronos::dynamics::{evolve, transition_probability};
use chronos::experiments::spectra::operator_matrix;
use chronos::operators::{ccr_defect, ctoa_matrix, eigvals_hermitian, OperatorKind};
use chronos::{EnergyBasis, SystemConfig, WaveFunction};
use num_complex::Complex64;
use proptest::prelude::*;

fn state(basis: &Arc<EnergyBasis>, parts: &[(f64, f64)]) -> WaveFunction {
    let c = parts.iter().take(basis.dim()).map(|&(a, b)| Complex64::new(a, b)).collect();
    WaveFunction::new(basis.clone(), c).unwrap().normalized().unwrap()
}

fn coeffs() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 17).prop_filter("nonzero", |v| {
        v.iter().map(|(a, b)| a * a + b * b).sum::<f64>() > 1e-3
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evolution_is_unitary(gamma in 0.01..1.5f64, c in coeffs(), t in -5.0..5.0f64) {
        let basis = EnergyBasis::shared(SystemConfig::atomic(gamma).unwrap(), 8).unwrap();
        let wf = state(&basis, &c);
        prop_assert!((evolve(&wf, t).norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn evolution_composes(gamma in 0.01..1.5f64, c in coeffs(), t1 in -1.0..1.0f64, t2 in -1.0..1.0f64) {
        let basis = EnergyBasis::shared(SystemConfig::atomic(gamma).unwrap(), 8).unwrap();
        let wf = state(&basis, &c);
        let a = evolve(&evolve(&wf, t1), t2);
        let b = evolve(&wf, t1 + t2);
        let diff: f64 = a.coeffs().iter().zip(b.coeffs()).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
        prop_assert!(diff <= 1e-10);
    }

    #[test]
    fn transitions_mirror_in_time(gamma in 0.01..1.5f64, a in coeffs(), b in coeffs(), t in -2.0..2.0f64) {
        let basis = EnergyBasis::shared(SystemConfig::atomic(gamma).unwrap(), 8).unwrap();
        let (wa, wb) = (state(&basis, &a), state(&basis, &b));
        let p = transition_probability(&wa, &wb, t).unwrap();
        let q = transition_probability(&wb, &wa, -t).unwrap();
        prop_assert!((p - q).abs() <= 1e-12);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&p));
    }

    #[test]
    fn ctoa_matrix_is_hermitian(gamma in 0.01..1.5f64, k in 1usize..12) {
        let basis = EnergyBasis::new(SystemConfig::atomic(gamma).unwrap(), k).unwrap();
        let m = ctoa_matrix(&basis);
        let n = m.dim();
        for i in 0..n {
            for j in 0..n {
                prop_assert!((m.get(i, j) - m.get(j, i).conj()).norm() <= 1e-14 * m.frobenius_norm());
            }
        }
    }

    #[test]
    fn cto_spectrum_pairs(gamma in 0.05..1.5f64, k in 1usize..20) {
        let basis = EnergyBasis::new(SystemConfig::atomic(gamma).unwrap(), k).unwrap();
        let m = operator_matrix(OperatorKind::CtoPtt, &basis).unwrap();
        let scale = m.frobenius_norm();
        let ev = eigvals_hermitian(&m).unwrap();
        let n = ev.len();
        for i in 0..n {
            prop_assert!((ev[i] + ev[n - 1 - i]).abs() <= 1e-10 * scale);
        }
        prop_assert_eq!(ev.iter().filter(|v| v.abs() <= 1e-10 * scale).count(), 1);
    }

    #[test]
    fn cto_commutator_exact_on_zero_sum(gamma in 0.05..1.5f64, c in coeffs()) {
        let basis = EnergyBasis::shared(SystemConfig::atomic(gamma).unwrap(), 8).unwrap();
        let mut v: Vec<Complex64> = c.iter().map(|&(a, b)| Complex64::new(a, b)).collect();
        let mean = v.iter().sum::<Complex64>() / v.len() as f64;
        v.iter_mut().for_each(|x| *x -= mean);
        prop_assume!(v.iter().map(|x| x.norm_sqr()).sum::<f64>() > 1e-6);
        let wf = WaveFunction::new(basis.clone(), v).unwrap();
        let t = operator_matrix(OperatorKind::CtoPtt, &basis).unwrap();
        prop_assert!(ccr_defect(&t, &basis, &wf, OperatorKind::CtoPtt).unwrap() <= 1e-10);
    }
}
