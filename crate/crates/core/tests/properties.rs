use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use agmc::agcode::{ag_code, oracle_filtration};
use agmc::code::LinearCode;
use agmc::curve::OnePointCurve;
use agmc::ecp::VerifyMode;
use agmc::field::{Elem, Field};
use agmc::matrix::Matrix;
use agmc::mceliece::{decrypt, encrypt, keygen, legitimate_pair, random_invertible};
use agmc::params::{scheme_params, CurveFamily};

const ORDERS: [u64; 14] = [2, 3, 4, 5, 7, 8, 9, 25, 27, 49, 81, 256, 1024, 4096];

fn fields() -> &'static [Field] {
    static F: OnceLock<Vec<Field>> = OnceLock::new();
    F.get_or_init(|| ORDERS.iter().map(|&q| Field::gf(q).unwrap()).collect())
}

fn small_fields() -> &'static [Field] {
    &fields()[..7]
}

fn curves() -> &'static [OnePointCurve] {
    static C: OnceLock<Vec<OnePointCurve>> = OnceLock::new();
    C.get_or_init(|| {
        [2, 3, 4]
            .into_iter()
            .map(|r| OnePointCurve::hermitian(r).unwrap())
            .collect()
    })
}

fn random_matrix(f: &Field, rows: usize, cols: usize, rng: &mut impl Rng) -> Matrix {
    let q = f.order();
    let data = (0..rows * cols)
        .map(|_| rng.gen_range(0..q) as Elem)
        .collect();
    Matrix::new(f, rows, cols, data).unwrap()
}

fn random_code(f: &Field, n: usize, k: usize, rng: &mut impl Rng) -> LinearCode {
    LinearCode::from_generator(&random_matrix(f, k, n, rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(i in 0..ORDERS.len(), a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let f = &fields()[i];
        let q = f.order() as u64;
        let (a, b, c) = ((a % q) as Elem, (b % q) as Elem, (c % q) as Elem);
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            prop_assert_eq!(f.exp(f.log(a) as u64), a);
        }
        let mut sum = 0;
        for _ in 0..f.characteristic() {
            sum = f.add(sum, a);
        }
        prop_assert_eq!(sum, 0);
    }

    #[test]
    fn rank_nullity_and_canonical_rref(i in 0..ORDERS.len(), rows in 1usize..9, cols in 1usize..12, seed in any::<u64>()) {
        let f = &fields()[i];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(f, rows, cols, &mut rng);
        let kernel = a.kernel();
        prop_assert_eq!(a.rank() + kernel.rows(), cols);
        prop_assert!(a.mul(&kernel.transpose()).unwrap().is_zero());
        let r = a.rref();
        prop_assert_eq!(&r.matrix.rref(), &r);
        prop_assert_eq!(&a.rref_reference(), &r);
        let s = random_invertible(f, rows, &mut rng);
        prop_assert_eq!(s.mul(&a).unwrap().rref(), r);
    }

    #[test]
    fn schur_product_laws(i in 0..7usize, n in 2usize..12, seed in any::<u64>()) {
        let f = &small_fields()[i];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_code(f, n, rng.gen_range(1..=n), &mut rng);
        let b = random_code(f, n, rng.gen_range(1..=n), &mut rng);
        let ab = a.schur_product(&b).unwrap();
        prop_assert_eq!(&ab, &b.schur_product(&a).unwrap());
        prop_assert_eq!(&a.schur_product(&LinearCode::repetition(f, n)).unwrap(), &a);
        let bigger = a.sum(&random_code(f, n, 1, &mut rng)).unwrap();
        prop_assert!(ab.is_subcode_of(&bigger.schur_product(&b).unwrap()).unwrap());
    }

    #[test]
    fn adjunction(i in 0..7usize, n in 2usize..12, seed in any::<u64>()) {
        let f = &small_fields()[i];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut k = || rng.gen_range(1..=n);
        let (ka, kb, kc) = (k(), k(), k());
        let a = random_code(f, n, ka, &mut rng);
        let b = random_code(f, n, kb, &mut rng);
        // Half the time, make C orthogonal to A * B.
        let c = if seed % 2 == 0 {
            a.schur_product(&b).unwrap().dual()
        } else {
            random_code(f, n, kc, &mut rng)
        };
        let x = a.schur_product(&b).unwrap().is_orthogonal_to(&c).unwrap();
        let y = b.schur_product(&c).unwrap().is_subcode_of(&a.dual()).unwrap();
        let z = a.schur_product(&c).unwrap().is_subcode_of(&b.dual()).unwrap();
        prop_assert_eq!(x, y);
        prop_assert_eq!(y, z);
    }

    #[test]
    fn dual_and_shorten_puncture(i in 0..7usize, n in 2usize..12, seed in any::<u64>()) {
        let f = &small_fields()[i];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c = random_code(f, n, rng.gen_range(1..=n), &mut rng);
        prop_assert_eq!(&c.dual().dual(), &c);
        let j: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.3)).collect();
        let lhs = c.dual().puncture(&j).unwrap();
        let rhs = c.shorten(&j).unwrap().puncture(&j).unwrap().dual();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn ag_code_dimension_and_weight(ci in 0..3usize, m_frac in 0.0f64..1.0, seed in any::<u64>()) {
        let curve = &curves()[ci];
        let (n, g) = (curve.len(), curve.genus());
        let m = (2 * g - 1) + ((n - 2 * g) as f64 * m_frac) as usize;
        let c = ag_code(curve, m).unwrap();
        prop_assert_eq!(c.dimension(), m + 1 - g);
        let poles: Vec<u32> = curve.pole_basis(m).iter().map(|mo| mo.pole).collect();
        prop_assert!(poles.windows(2).all(|w| w[0] < w[1]));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let q = curve.field().order();
        let msg: Vec<Elem> = (0..c.dimension()).map(|_| rng.gen_range(0..q) as Elem).collect();
        let w = c.encode(&msg).unwrap().iter().filter(|&&x| x != 0).count();
        prop_assert!(w == 0 || w >= n - m);
        if 2 * g < m && 2 * m < n {
            prop_assert_eq!(c.schur_square().dimension(), 2 * m - g + 1);
        }
    }

    #[test]
    fn decrypt_inverts_encrypt(seed in any::<u64>(), weight_cut in 0usize..3) {
        let curve = &curves()[1];
        let (pk, sk) = keygen(curve, 13, seed % 8, true).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let msg: Vec<Elem> = (0..pk.dimension()).map(|_| rng.gen_range(0..9)).collect();
        let weight = pk.t.saturating_sub(weight_cut);
        let ct = encrypt(&pk, &msg, seed, Some(weight)).unwrap();
        prop_assert_eq!(decrypt(&sk, &ct).unwrap(), msg);
    }

    #[test]
    fn decoder_soundness_and_locators(seed in any::<u64>(), weight in 0usize..6) {
        let curve = &curves()[1];
        let (pk, sk) = keygen(curve, 13, 3, true).unwrap();
        let pair = legitimate_pair(&sk).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let msg: Vec<Elem> = (0..pk.dimension()).map(|_| rng.gen_range(0..9)).collect();
        let ct = encrypt(&pk, &msg, seed, Some(weight)).unwrap();
        let c = pk.g_pub.vec_mul(&msg).unwrap();
        let f = pk.field();
        if let Ok((dc, e)) = pair.decode(&ct.y) {
            prop_assert!(pair.c.contains(&dc).unwrap());
            prop_assert!(e.iter().filter(|&&x| x != 0).count() <= pair.t);
            for i in 0..ct.y.len() {
                prop_assert_eq!(f.add(dc[i], e[i]), ct.y[i]);
            }
        }
        if weight <= pair.t {
            let support: Vec<usize> = (0..c.len()).filter(|&i| c[i] != ct.y[i]).collect();
            for a in pair.locator_space(&ct.y).unwrap().basis() {
                prop_assert!(support.iter().all(|&i| a[i] == 0));
            }
        }
    }

    #[test]
    fn param_report_matches_keys(ci in 0..3usize, m_frac in 0.0f64..1.0) {
        let curve = &curves()[ci];
        let r = [2, 3, 4][ci];
        let (n, g) = (curve.len(), curve.genus());
        let m = 3 * g + 1 + ((n - 3 * g - 1) as f64 * m_frac) as usize;
        let report = scheme_params(CurveFamily::Hermitian { r }, m).unwrap();
        let (pk, _) = keygen(curve, m, 0, true).unwrap();
        prop_assert_eq!(report.k_pub, pk.dimension());
        prop_assert_eq!(report.t, pk.t);
        prop_assert_eq!(report.n, pk.len());
        prop_assert_eq!(report.d_star, m + 2 - 2 * g);
        prop_assert_eq!(report.t, (report.d_star - g - 1) / 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn oracle_chain_drops_by_one(ci in 0..3usize, m_frac in 0.0f64..1.0, p_frac in 0.0f64..1.0) {
        let curve = &curves()[ci];
        let (n, g) = (curve.len(), curve.genus());
        let m = 2 * g + ((n - 2 * g) as f64 * m_frac) as usize;
        let p = (n as f64 * p_frac) as usize % n;
        let mut prev = oracle_filtration(curve, m, p, 0).unwrap();
        for s in 1..=(m + 1 - 2 * g) {
            let b = oracle_filtration(curve, m, p, s).unwrap();
            prop_assert!(b.is_subcode_of(&prev).unwrap());
            prop_assert_eq!(b.dimension() + 1, prev.dimension());
            prev = b;
        }
    }

    #[test]
    fn legitimate_pairs_verify(ci in 1..3usize, m_frac in 0.0f64..1.0) {
        let curve = &curves()[ci];
        let (n, g) = (curve.len(), curve.genus());
        let m = 3 * g + 1 + ((n - 3 * g - 1) as f64 * m_frac) as usize;
        let (_, sk) = keygen(curve, m, 0, true).unwrap();
        let pair = legitimate_pair(&sk).unwrap();
        let d_a = n - (pair.t + g);
        let d_b_perp = (m - pair.t - g) + 2 - 2 * g;
        let d_c = m + 2 - 2 * g;
        let report = pair.verify(VerifyMode::Designed { d_a, d_b_perp, d_c }).unwrap();
        prop_assert!(report.all());
    }
}
