//! End-to-end acceptance suite: one test per headline guarantee of the
//! toolkit, each printing a single [PASS]/[FAIL] line.

use std::panic::{catch_unwind, AssertUnwindSafe};

use num_bigint::BigInt;
use num_complex::Complex64;
use once_cell::sync::Lazy;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quivar::catalog::Catalog;
use quivar::claims::{run_claim, run_report, ClaimContext, Options};
use quivar::cyclo::CycNum;
use quivar::group::{
    closure, is_normal, quotient_table, reference_fingerprint, table_fingerprint,
};
use quivar::molien::{degrees_product, molien_compare};
use quivar::poly::{is_invariant, proportional, relation_check, reynolds_basis};
use quivar::qgeom::{self, QuartitState, QubitState};
use quivar::report::Status;
use quivar::Error;

static CTX: Lazy<ClaimContext> =
    Lazy::new(|| ClaimContext::with_defaults().expect("bundled catalog loads"));

fn criterion(n: usize, label: &str, body: impl FnOnce()) {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(()) => println!("[PASS] criterion {n}: {label}"),
        Err(cause) => {
            println!("[FAIL] criterion {n}: {label}");
            std::panic::resume_unwind(cause);
        }
    }
}

#[test]
fn criterion_01_group_orders() {
    criterion(1, "exact closure orders for all catalogued groups", || {
        let expected: [(&str, u64); 7] = [
            ("p2", 64),
            ("pq", 64),
            ("ccnot", 3072),
            ("c1", 192),
            ("u4", 24),
            ("u8", 96),
            ("cs", 46080),
        ];
        for (id, want) in expected {
            let c = CTX.closure_of(id).unwrap();
            assert_eq!(c.order(), want, "order of {id}");
        }
    });
}

#[test]
fn criterion_02_pauli_histograms() {
    criterion(2, "qubit/quartit Pauli groups share order but not statistics", || {
        let p2 = CTX.fingerprint_of("p2").unwrap();
        let pq = CTX.fingerprint_of("pq").unwrap();
        assert_eq!(p2.order, pq.order);
        assert_ne!(
            p2.order_histogram, pq.order_histogram,
            "element-order histograms must differ"
        );
        assert_eq!(p2.center_order, 4);
        assert_eq!(pq.center_order, 4);
    });
}

#[test]
fn criterion_03_quotient_structure() {
    criterion(3, "normality and quotient fingerprints", || {
        let p2 = CTX.closure_of("p2").unwrap();
        for (big, reference) in [("ccnot", "Z2xS4"), ("cs", "S6")] {
            let g = CTX.closure_of(big).unwrap();
            assert!(is_normal(&p2, &g).unwrap(), "p2 normal in {big}");
            let table = quotient_table(&g, &p2).unwrap();
            let got = table_fingerprint(&table);
            let want = reference_fingerprint(reference).unwrap();
            assert_eq!(got, want, "{big}/p2 vs {reference}");
        }
    });
}

#[test]
fn criterion_04_molien_series() {
    criterion(4, "Molien series match closed forms to order 40", || {
        for (gid, fid) in [("u4", "ms_u4"), ("u8", "ms_u8"), ("c1", "ms_c1"), ("cs", "ms_cs")] {
            let series = CTX.series_of(gid).unwrap();
            let form = &CTX.catalog.form(fid).unwrap().form;
            let cmp = molien_compare(&series, form, CTX.options.series_order);
            assert!(cmp.matches, "{gid} vs {fid}: mismatch {:?}", cmp.first_mismatch);
        }
        // The printed octahedral form disagrees with the computed series and
        // must be reported as a discrepancy together with the true series.
        let octa = run_claim(&CTX, "MS-OCTA");
        assert_eq!(octa.status, Status::Discrepancy, "MS-OCTA: {}", octa.computed);
        assert!(
            octa.computed.contains("computed series"),
            "discrepancy must attach the computed series: {}",
            octa.computed
        );
    });
}

#[test]
fn criterion_05_invariance_suite() {
    criterion(5, "catalogued invariants are fixed by their groups", || {
        let cases = [
            ("T", "octa"),
            ("W", "u8"),
            ("kappa", "u8"),
            ("W", "c1"),
            ("G", "c1"),
            ("inv8", "cs"),
            ("inv12", "cs"),
            ("inv20", "cs"),
            ("inv24", "cs"),
            ("I2", "u36"),
            ("I8", "u36"),
        ];
        for (inv, gid) in cases {
            let poly = &CTX.catalog.invariant(inv).unwrap().poly;
            let gens = &CTX.catalog.group(gid).unwrap().generators;
            assert!(is_invariant(poly, gens).unwrap(), "{inv} under {gid}");
        }
    });
}

#[test]
fn criterion_06_syzygies() {
    criterion(6, "syzygies hold exactly; printed kappa variant does not", || {
        let lookup = |name: &str| CTX.catalog.invariant(name).ok().map(|i| i.poly.clone());
        assert!(
            relation_check("108*T^4 - W^3 + kappa^2", &lookup).unwrap(),
            "108 T^4 - W^3 + kappa^2 = 0"
        );
        assert!(
            relation_check("W^3 - G - 42*T^4", &lookup).unwrap(),
            "W^3 - G = 42 T^4"
        );
        assert!(
            !relation_check("108*T^4 - W^3 + kappa_printed^2", &lookup).unwrap(),
            "printed kappa must break the first syzygy"
        );
        let printed = run_claim(&CTX, "REL-KAPPA-PRINTED");
        assert_eq!(printed.status, Status::Discrepancy, "{}", printed.computed);
    });
}

#[test]
fn criterion_07_reynolds_dimensions() {
    criterion(7, "Reynolds fixed-space dimensions match Molien coefficients", || {
        let budget = CTX.options.budget;
        for (gid, max_degree) in [("u4", 8usize), ("u8", 12)] {
            let group = CTX.closure_of(gid).unwrap();
            let series = CTX.series_of(gid).unwrap();
            for d in 0..=max_degree {
                let basis = reynolds_basis(&group, d, budget).unwrap();
                assert_eq!(
                    BigInt::from(basis.len()),
                    series.coefficients[d],
                    "{gid} degree {d}"
                );
            }
        }
        let cs = CTX.closure_of("cs").unwrap();
        let series = CTX.series_of("cs").unwrap();
        let basis = reynolds_basis(&cs, 8, budget).unwrap();
        assert_eq!(BigInt::from(basis.len()), series.coefficients[8], "cs degree 8");
        assert_eq!(basis.len(), 1);
        let inv8 = &CTX.catalog.invariant("inv8").unwrap().poly;
        assert!(
            proportional(&basis[0], inv8).is_some(),
            "degree-8 fixed space must be spanned by inv8"
        );
    });
}

#[test]
fn criterion_08_state_geometry() {
    criterion(8, "state geometry: SIC, sphere maps, entanglement, roots", || {
        // SIC overlaps are exactly flat at 1/3.
        let overlaps = qgeom::sic_overlaps(&qgeom::sic_fiducial());
        for (i, row) in overlaps.iter().enumerate() {
            for (j, &p) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 1.0 / 3.0 };
                assert!((p - want).abs() < 1e-12, "overlap ({i},{j}) = {p}");
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(0x0ACC_E210);
        let amp = |rng: &mut ChaCha8Rng| {
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        };
        for _ in 0..1000 {
            let psi = QubitState::new(amp(&mut rng), amp(&mut rng)).normalized().unwrap();
            let b = qgeom::bloch_map(&psi).unwrap();
            assert!((b.norm() - 1.0).abs() < 1e-12, "Bloch vector off the sphere");
        }
        for _ in 0..1000 {
            let psi = QuartitState::new([
                amp(&mut rng),
                amp(&mut rng),
                amp(&mut rng),
                amp(&mut rng),
            ])
            .normalized()
            .unwrap();
            let h = qgeom::second_hopf(&psi).unwrap();
            assert!((h.norm() - 1.0).abs() < 1e-12, "Hopf image off the 4-sphere");
        }

        // Maximally entangled states project to the equatorial u/v circle;
        // product states land at u = v = 0.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = QuartitState::new([
            Complex64::new(s, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(s, 0.0),
        ]);
        let h = qgeom::second_hopf(&bell).unwrap();
        assert!(h.xi.abs() < 1e-10 && h.eta.abs() < 1e-10 && h.zeta.abs() < 1e-10);
        for _ in 0..100 {
            let (a0, a1) = (amp(&mut rng), amp(&mut rng));
            let (b0, b1) = (amp(&mut rng), amp(&mut rng));
            let product = QuartitState::new([a0 * b0, a0 * b1, a1 * b0, a1 * b1])
                .normalized()
                .unwrap();
            let h = qgeom::second_hopf(&product).unwrap();
            assert!(h.u.abs() < 1e-10 && h.v.abs() < 1e-10, "product state u,v = {},{}", h.u, h.v);
        }

        // Root polynomials of the catalogued point sets reproduce the
        // octahedral sextic and one tetrahedral quartic up to a scalar.
        let octa = &CTX.catalog.pointset("octa_points").unwrap().points;
        let sextic = qgeom::root_polynomial(octa).unwrap();
        let t = &CTX.catalog.invariant("T").unwrap().poly;
        assert!(proportional(&sextic, t).is_some(), "sextic from octahedral roots");
        let tetra = &CTX.catalog.pointset("tetra_points").unwrap().points;
        let quartic = qgeom::root_polynomial(tetra).unwrap();
        let tet_minus = &CTX.catalog.invariant("tet_minus").unwrap().poly;
        assert!(
            proportional(&quartic, tet_minus).is_some(),
            "quartic from tetrahedral roots"
        );
    });
}

#[test]
fn criterion_09_lattice_and_cap() {
    criterion(9, "reflection degrees, lattice-preserving gates, closure cap", || {
        assert_eq!(
            degrees_product(&[2, 8, 12, 14, 18, 20, 24, 30]),
            BigInt::from(696_729_600u64)
        );
        let group = CTX.catalog.group("u36").unwrap();
        for (id, m) in group.generator_ids.iter().zip(&group.generators) {
            assert!(m.is_real(), "{id} must be real");
            assert!(m.mul(&m.transpose()).unwrap().is_identity(), "{id} orthogonal");
            let det = m.det().unwrap();
            assert!(
                det == CycNum::one() || det == CycNum::from_int(-1),
                "{id} must have determinant of modulus one"
            );
            assert!(qgeom::e8_preserved(m).unwrap(), "{id} preserves the lattice");
        }
        match closure(&group.generators, 10_000_000) {
            Err(Error::CapExceeded { cap }) => assert_eq!(cap, 10_000_000),
            Err(other) => panic!("unexpected error: {other}"),
            Ok(c) => panic!("closure unexpectedly finished with order {}", c.order()),
        }
    });
}

#[test]
fn criterion_10_deterministic_reports() {
    criterion(10, "full registry runs are byte-identical across thread counts", || {
        // A reduced cap keeps the overflow probe cheap while every ordinary
        // claim (largest group: 46080) still completes.
        let full_run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                let options = Options { cap: 50_000, ..Options::default() };
                let ctx = ClaimContext::new(Catalog::load().unwrap(), options);
                let report = run_report(&ctx, None, String::new());
                report.deterministic_view().to_json()
            })
        };
        let single = full_run(1);
        let multi = full_run(3);
        assert_eq!(single, multi, "reports differ between thread counts");
        assert!(single.contains("\"schema_version\": 1"));
    });
}
