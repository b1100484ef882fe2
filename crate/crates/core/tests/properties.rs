use proptest::prelude::*;

use nustable::distributions::SechDist;
use nustable::families::NuFamily;
use nustable::numerics::{ks_statistic, EmpiricalSample};
use nustable::series::{expand_pgf, expand_series};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn chebyshev_composition_commutes(a in 2u32..=5, b in 2u32..=5) {
        let f = NuFamily::chebyshev();
        let sa = expand_series(&f, &f.with_n(a).unwrap(), 200).unwrap();
        let sb = expand_series(&f, &f.with_n(b).unwrap(), 200).unwrap();
        let ab = sa.compose(&sb).unwrap();
        let ba = sb.compose(&sa).unwrap();
        for (x, y) in ab.coeffs().iter().zip(ba.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
        // and the composite is the table of n = a·b
        let sab = expand_series(&f, &f.with_n(a * b).unwrap(), 200).unwrap();
        for (x, y) in ab.coeffs().iter().zip(sab.coeffs()) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn tables_are_probability_laws(n in 1u32..=40, m in 1u32..=3) {
        let f = NuFamily::chebyshev_m(m).unwrap();
        let pmf = expand_pgf(&f, &f.with_n(n).unwrap(), None).unwrap();
        prop_assert!(pmf.check().is_ok(), "{:?}", pmf.check());
    }

    #[test]
    fn melamed_tables_are_probability_laws(p in 0.05f64..0.95, m in 1u32..=4) {
        let f = NuFamily::melamed(m).unwrap();
        let pmf = expand_pgf(&f, &f.admit(p).unwrap(), None).unwrap();
        prop_assert!(pmf.check().is_ok(), "{:?}", pmf.check());
    }

    #[test]
    fn fixed_point_residual(t in 0.0f64..10.0, n in 1u32..=20, m in 1u32..=4) {
        for f in [NuFamily::chebyshev_m(m).unwrap(), NuFamily::melamed(m).unwrap()] {
            let p = if f.delta() == nustable::families::Delta::OpenUnitInterval {
                f.admit(1.0 / (n as f64 + 1.0)).unwrap()
            } else {
                f.with_n(n).unwrap()
            };
            let lhs = f.phi(t).unwrap();
            let rhs = f.pgf_eval(&p, f.phi(p.p() * t).unwrap()).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-10);
        }
    }

    #[test]
    fn ks_invariant_under_monotone_maps(values in prop::collection::vec(-5.0f64..5.0, 1..200)) {
        let sech = SechDist::standard();
        let s = EmpiricalSample::new(values.clone()).unwrap();
        let d = ks_statistic(&s, |x| sech.cdf(x));
        // y = x³ + x is strictly increasing; F_Y(y) = F(g⁻¹(y))
        let g = |x: f64| x * x * x + x;
        let ginv = |y: f64| {
            let (mut lo, mut hi) = (-10.0f64, 10.0f64);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if g(mid) < y { lo = mid } else { hi = mid }
            }
            0.5 * (lo + hi)
        };
        let t = EmpiricalSample::new(values.iter().map(|&x| g(x)).collect()).unwrap();
        let d2 = ks_statistic(&t, |y| sech.cdf(ginv(y)));
        prop_assert!((d - d2).abs() <= 1e-12);
    }

    #[test]
    fn sech_quantile_roundtrip(u in 1e-9f64..(1.0 - 1e-9), a in 0.1f64..10.0) {
        let d = SechDist::new(a).unwrap();
        let x = d.quantile(u).unwrap();
        prop_assert!((d.cdf(x) - u).abs() <= 1e-12);
    }
}
