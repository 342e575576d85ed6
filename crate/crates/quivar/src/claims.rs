//! Claim execution: a context of lazily shared closures and series, one
//! checker per claim family, and parallel evaluation over the registry.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::catalog::{Catalog, ClaimDef, ExpectedStatus};
use crate::cyclo::CycNum;
use crate::group::{
    closure, derived_subgroup, fingerprint, is_normal, quotient_table, reference_fingerprint,
    table_fingerprint, Closure, GroupFingerprint,
};
use crate::matrix::CycMatrix;
use crate::molien::{degrees_product, expand_closed_form, molien_compare, molien_series, MolienSeries};
use crate::poly::{
    jacobian_independent, msym, parse_relation, proportional, reynolds_basis, MultiPoly,
};
use crate::qgeom::{self, QuartitState, QubitState, Quaternion, S4Point};
use crate::report::{ClaimResult, Report, Status};
use crate::{Error, Result};

pub const DEFAULT_CAP: usize = 10_000_000;
pub const DEFAULT_SERIES_ORDER: usize = 40;
pub const DEFAULT_BUDGET: u64 = 2_000_000_000;
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct Options {
    pub cap: usize,
    pub series_order: usize,
    pub budget: u64,
    pub tol: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            cap: DEFAULT_CAP,
            series_order: DEFAULT_SERIES_ORDER,
            budget: DEFAULT_BUDGET,
            tol: DEFAULT_TOL,
        }
    }
}

/// Shared state for a batch of claims.  Closures, fingerprints and Molien
/// series are computed once and reused across checkers.
pub struct ClaimContext {
    pub catalog: Catalog,
    pub options: Options,
    closures: Mutex<HashMap<String, Arc<Closure>>>,
    fingerprints: Mutex<HashMap<String, Arc<GroupFingerprint>>>,
    series: Mutex<HashMap<String, Arc<MolienSeries>>>,
}

impl ClaimContext {
    pub fn new(catalog: Catalog, options: Options) -> Self {
        ClaimContext {
            catalog,
            options,
            closures: Mutex::new(HashMap::new()),
            fingerprints: Mutex::new(HashMap::new()),
            series: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_defaults() -> Result<Self> {
        Ok(Self::new(Catalog::load()?, Options::default()))
    }

    pub fn closure_of(&self, id: &str) -> Result<Arc<Closure>> {
        let mut cache = self.closures.lock().unwrap();
        if let Some(c) = cache.get(id) {
            return Ok(c.clone());
        }
        let def = self.catalog.group(id)?;
        let c = Arc::new(closure(&def.generators, self.options.cap)?);
        cache.insert(id.to_string(), c.clone());
        Ok(c)
    }

    pub fn fingerprint_of(&self, id: &str) -> Result<Arc<GroupFingerprint>> {
        {
            let cache = self.fingerprints.lock().unwrap();
            if let Some(f) = cache.get(id) {
                return Ok(f.clone());
            }
        }
        let c = self.closure_of(id)?;
        let f = Arc::new(fingerprint(&c)?);
        self.fingerprints
            .lock()
            .unwrap()
            .insert(id.to_string(), f.clone());
        Ok(f)
    }

    pub fn series_of(&self, id: &str) -> Result<Arc<MolienSeries>> {
        {
            let cache = self.series.lock().unwrap();
            if let Some(s) = cache.get(id) {
                return Ok(s.clone());
            }
        }
        let c = self.closure_of(id)?;
        let s = Arc::new(molien_series(&c, self.options.series_order)?);
        self.series
            .lock()
            .unwrap()
            .insert(id.to_string(), s.clone());
        Ok(s)
    }
}

/// Run one claim; checker errors surface as `fail` with diagnostics.
pub fn run_claim(ctx: &ClaimContext, id: &str) -> ClaimResult {
    let start = Instant::now();
    let claim = match ctx.catalog.claim(id) {
        Ok(c) => c.clone(),
        Err(e) => {
            return ClaimResult {
                id: id.to_string(),
                status: Status::Fail,
                expected: String::new(),
                computed: format!("checker error: {e}"),
                runtime_ms: start.elapsed().as_millis() as u64,
            }
        }
    };
    let outcome = dispatch(ctx, &claim);
    let runtime_ms = start.elapsed().as_millis() as u64;
    match outcome {
        Ok((agrees, computed)) => {
            let status = match (agrees, claim.expect) {
                (true, ExpectedStatus::Pass) => Status::Pass,
                (false, ExpectedStatus::KnownDiscrepancy) => Status::Discrepancy,
                (false, ExpectedStatus::Pass) => Status::Fail,
                // A catalogued discrepancy that suddenly agrees means the
                // registry is stale: flag it.
                (true, ExpectedStatus::KnownDiscrepancy) => Status::Fail,
            };
            ClaimResult { id: id.to_string(), status, expected: claim.expected, computed, runtime_ms }
        }
        Err(e) => ClaimResult {
            id: id.to_string(),
            status: Status::Fail,
            expected: claim.expected,
            computed: format!("checker error: {e}"),
            runtime_ms,
        },
    }
}

/// Run every claim whose id matches the `*`-wildcard pattern (all claims
/// when `None`), in parallel, returning results sorted by id.
pub fn run_claims(ctx: &ClaimContext, pattern: Option<&str>) -> Vec<ClaimResult> {
    let ids: Vec<String> = ctx
        .catalog
        .claims
        .keys()
        .filter(|id| pattern.map_or(true, |p| glob_match(p, id)))
        .cloned()
        .collect();
    let mut results: Vec<ClaimResult> = ids
        .par_iter()
        .map(|id| run_claim(ctx, id))
        .collect();
    results.sort_by(|a, b| a.id.cmp(&b.id));
    results
}

/// Full registry run assembled into a report.
pub fn run_report(ctx: &ClaimContext, pattern: Option<&str>, timestamp: String) -> Report {
    Report::new(run_claims(ctx, pattern), timestamp)
}

/// Glob matching with `*` as the only wildcard.
pub fn glob_match(pattern: &str, text: &str) -> bool {
    let p: Vec<char> = pattern.chars().collect();
    let t: Vec<char> = text.chars().collect();
    let (mut pi, mut ti) = (0usize, 0usize);
    let (mut star, mut mark) = (None::<usize>, 0usize);
    while ti < t.len() {
        if pi < p.len() && (p[pi] == t[ti]) {
            pi += 1;
            ti += 1;
        } else if pi < p.len() && p[pi] == '*' {
            star = Some(pi);
            mark = ti;
            pi += 1;
        } else if let Some(s) = star {
            pi = s + 1;
            mark += 1;
            ti = mark;
        } else {
            return false;
        }
    }
    while pi < p.len() && p[pi] == '*' {
        pi += 1;
    }
    pi == p.len()
}

// --- checker dispatch ---------------------------------------------------

type Outcome = Result<(bool, String)>;

fn arg<'a>(claim: &'a ClaimDef, i: usize) -> Result<&'a str> {
    claim
        .args
        .get(i)
        .map(String::as_str)
        .ok_or_else(|| Error::Invalid(format!("claim {} missing argument {i}", claim.id)))
}

fn int_arg(claim: &ClaimDef, i: usize) -> Result<u64> {
    arg(claim, i)?
        .parse()
        .map_err(|_| Error::Parse(format!("claim {}: bad integer argument", claim.id)))
}

fn dispatch(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    match claim.checker.as_str() {
        "closure_order" => closure_order(ctx, claim),
        "center_order" => center_order(ctx, claim),
        "derived_order" => derived_order(ctx, claim),
        "derived_equals_group" => derived_equals_group(ctx, claim),
        "order_histogram" => order_histogram(ctx, claim),
        "hist_differs" => hist_differs(ctx, claim),
        "fingerprint_matches_ref" => fingerprint_matches_ref(ctx, claim),
        "fingerprint_equal" => fingerprint_equal(ctx, claim),
        "normal_subgroup" => normal_subgroup(ctx, claim),
        "quotient_matches_ref" => quotient_matches_ref(ctx, claim),
        "molien_compare" => molien_compare_claim(ctx, claim),
        "degrees_product" => degrees_product_claim(ctx, claim),
        "gate_unitary" => gate_unitary(ctx, claim),
        "gates_real_orthogonal" => gates_real_orthogonal(ctx, claim),
        "invariant_under" => invariant_under(ctx, claim),
        "msym_terms" => msym_terms(ctx, claim),
        "relation_zero" => relation_zero(ctx, claim),
        "reynolds_dims" => reynolds_dims(ctx, claim),
        "reynolds_proportional" => reynolds_proportional(ctx, claim),
        "jacobian_independence" => jacobian_independence(ctx, claim),
        "sic_overlaps" => sic_overlaps_claim(),
        "bloch_landmarks" => bloch_landmarks(),
        "stereo_roundtrip" => stereo_roundtrip(),
        "hopf_norms" => hopf_norms(),
        "hopf_landmarks" => hopf_landmarks(),
        "quat_agrees" => quat_agrees(),
        "fiber_invariance" => fiber_invariance(),
        "s_rows_entangled" => s_rows_entangled(ctx, claim),
        "hopf_zeta_printed" => hopf_zeta_printed(),
        "eigenbasis_report" => eigenbasis_report(ctx, claim),
        "triple_eigenbasis_entangled" => triple_eigenbasis_entangled(ctx, claim),
        "root_proportional" => root_proportional(ctx, claim),
        "e8_basis_valid" => e8_basis_valid(),
        "e8_members" => e8_members(),
        "e8_preserved_by" => e8_preserved_by(ctx, claim),
        "closure_cap_exceeded" => closure_cap_exceeded(ctx, claim),
        other => Err(Error::UnknownId(format!("checker {other}"))),
    }
}

// --- group checkers -----------------------------------------------------

fn closure_order(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let c = ctx.closure_of(arg(claim, 0)?)?;
    let want = int_arg(claim, 1)?;
    Ok((c.order() == want, c.order().to_string()))
}

fn center_order(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let f = ctx.fingerprint_of(arg(claim, 0)?)?;
    let want = int_arg(claim, 1)?;
    Ok((f.center_order == want, f.center_order.to_string()))
}

fn derived_order(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let f = ctx.fingerprint_of(arg(claim, 0)?)?;
    let want = int_arg(claim, 1)?;
    Ok((f.derived_order == want, f.derived_order.to_string()))
}

fn derived_equals_group(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let g = ctx.closure_of(arg(claim, 0)?)?;
    let other = ctx.closure_of(arg(claim, 1)?)?;
    let want = int_arg(claim, 2)?;
    let derived = derived_subgroup(&g)?;
    let mut same = derived.order() == other.order();
    if same {
        for idx in 0..other.order() as usize {
            if !derived.contains(&other.element(idx)) {
                same = false;
                break;
            }
        }
    }
    let ok = derived.order() == want && same;
    let computed = if same {
        format!("order {}, equal as a set", derived.order())
    } else {
        format!("order {}, differs as a set", derived.order())
    };
    Ok((ok, computed))
}

fn format_histogram(f: &GroupFingerprint) -> String {
    f.order_histogram
        .iter()
        .map(|(k, v)| format!("{k}:{v}"))
        .collect::<Vec<_>>()
        .join(",")
}

fn order_histogram(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let f = ctx.fingerprint_of(arg(claim, 0)?)?;
    let got = format_histogram(&f);
    Ok((got == arg(claim, 1)?, got))
}

fn hist_differs(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let a = ctx.fingerprint_of(arg(claim, 0)?)?;
    let b = ctx.fingerprint_of(arg(claim, 1)?)?;
    let differ = a.order_histogram != b.order_histogram;
    let computed = if differ {
        "distinct histograms".to_string()
    } else {
        "identical histograms".to_string()
    };
    Ok((differ, computed))
}

fn fingerprint_matches_ref(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let f = ctx.fingerprint_of(arg(claim, 0)?)?;
    let r = reference_fingerprint(arg(claim, 1)?)?;
    Ok((*f == r, f.to_string()))
}

fn fingerprint_equal(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let a = ctx.fingerprint_of(arg(claim, 0)?)?;
    let b = ctx.fingerprint_of(arg(claim, 1)?)?;
    let computed = if a == b {
        a.to_string()
    } else {
        format!("{a} vs {b}")
    };
    Ok((a == b, computed))
}

fn normal_subgroup(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let sub = ctx.closure_of(arg(claim, 0)?)?;
    let g = ctx.closure_of(arg(claim, 1)?)?;
    let ok = is_normal(&sub, &g)?;
    Ok((ok, if ok { "normal".into() } else { "not normal".into() }))
}

fn quotient_matches_ref(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let g = ctx.closure_of(arg(claim, 0)?)?;
    let n = ctx.closure_of(arg(claim, 1)?)?;
    let table = quotient_table(&g, &n)?;
    let f = table_fingerprint(&table);
    let r = reference_fingerprint(arg(claim, 2)?)?;
    Ok((f == r, f.to_string()))
}

// --- series checkers ----------------------------------------------------

fn coeff_prefix(coeffs: &[num_bigint::BigInt], upto: usize) -> String {
    coeffs
        .iter()
        .take(upto + 1)
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn molien_compare_claim(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let series = ctx.series_of(arg(claim, 0)?)?;
    let form = ctx.catalog.form(arg(claim, 1)?)?;
    let order = ctx.options.series_order;
    let cmp = molien_compare(&series, &form.form, order);
    if cmp.matches {
        Ok((true, format!("coefficients match through degree {order}")))
    } else {
        let (d, got, want) = cmp.first_mismatch.expect("mismatch position");
        let expansion = expand_closed_form(&form.form, order);
        Ok((
            false,
            format!(
                "first mismatch at t^{d}: computed {got}, form {want}; \
                 computed series {}; form series {}",
                coeff_prefix(&series.coefficients, 12),
                coeff_prefix(&expansion, 12)
            ),
        ))
    }
}

fn degrees_product_claim(_ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let want: num_bigint::BigInt = arg(claim, 0)?
        .parse()
        .map_err(|_| Error::Parse(format!("claim {}: bad product", claim.id)))?;
    let degrees: Vec<u64> = claim.args[1..]
        .iter()
        .map(|s| {
            s.parse()
                .map_err(|_| Error::Parse(format!("claim {}: bad degree", claim.id)))
        })
        .collect::<Result<_>>()?;
    let got = degrees_product(&degrees);
    Ok((got == want, got.to_string()))
}

// --- gate checkers ------------------------------------------------------

fn gate_unitary(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let gate = ctx.catalog.gate(arg(claim, 0)?)?;
    let ok = gate.matrix.is_unitary();
    Ok((ok, if ok { "unitary".into() } else { "not unitary".into() }))
}

fn gates_real_orthogonal(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let mut parts = Vec::new();
    let mut all = true;
    for id in &claim.args {
        let m = &ctx.catalog.gate(id)?.matrix;
        let det = m.det()?;
        let orthogonal = m.is_real() && m.mul(&m.transpose())?.is_identity();
        let unimodular = det == CycNum::one() || det == CycNum::from_int(-1);
        all &= orthogonal && unimodular;
        parts.push(format!(
            "{id}: {}, det {det}",
            if orthogonal { "real orthogonal" } else { "not orthogonal" }
        ));
    }
    Ok((all, parts.join("; ")))
}

// --- invariant checkers -------------------------------------------------

fn invariant_under(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let inv = ctx.catalog.invariant(arg(claim, 0)?)?;
    let group = ctx.catalog.group(arg(claim, 1)?)?;
    let ok = crate::poly::is_invariant(&inv.poly, &group.generators)?;
    let computed = if ok {
        format!("invariant under all {} generators", group.generators.len())
    } else {
        "moved by at least one generator".to_string()
    };
    Ok((ok, computed))
}

fn msym_terms(_ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let lambda: Vec<usize> = arg(claim, 0)?
        .split(',')
        .map(|p| {
            p.parse()
                .map_err(|_| Error::Parse(format!("claim {}: bad partition", claim.id)))
        })
        .collect::<Result<_>>()?;
    let nvars: usize = arg(claim, 1)?
        .parse()
        .map_err(|_| Error::Parse(format!("claim {}: bad variable count", claim.id)))?;
    let want: usize = arg(claim, 2)?
        .parse()
        .map_err(|_| Error::Parse(format!("claim {}: bad count", claim.id)))?;
    let p = msym(&lambda, nvars)?;
    Ok((p.num_terms() == want, p.num_terms().to_string()))
}

fn relation_zero(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let expr = claim.args.join(" ");
    let lookup = |name: &str| {
        ctx.catalog
            .invariants
            .get(name)
            .map(|inv| inv.poly.clone())
    };
    let remainder = parse_relation(&expr, &lookup)?;
    if remainder.is_zero() {
        Ok((true, "identically zero".into()))
    } else {
        Ok((
            false,
            format!("nonzero remainder with {} terms", remainder.num_terms()),
        ))
    }
}

fn reynolds_dims(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let gid = arg(claim, 0)?;
    let dmax: usize = arg(claim, 1)?
        .parse()
        .map_err(|_| Error::Parse(format!("claim {}: bad degree", claim.id)))?;
    let c = ctx.closure_of(gid)?;
    let series = ctx.series_of(gid)?;
    let mut dims = Vec::new();
    let mut all = true;
    for d in 1..=dmax {
        let basis = reynolds_basis(&c, d, ctx.options.budget)?;
        let want = series
            .coefficients
            .get(d)
            .cloned()
            .unwrap_or_else(|| num_bigint::BigInt::from(0));
        all &= num_bigint::BigInt::from(basis.len()) == want;
        dims.push(basis.len().to_string());
    }
    let computed = format!(
        "degrees 1..={dmax}: dims {} ({})",
        dims.join(","),
        if all { "all match the series" } else { "mismatch with the series" }
    );
    Ok((all, computed))
}

fn reynolds_proportional(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let c = ctx.closure_of(arg(claim, 0)?)?;
    let d: usize = arg(claim, 1)?
        .parse()
        .map_err(|_| Error::Parse(format!("claim {}: bad degree", claim.id)))?;
    let inv = ctx.catalog.invariant(arg(claim, 2)?)?;
    let basis = reynolds_basis(&c, d, ctx.options.budget)?;
    if basis.len() != 1 {
        return Ok((false, format!("dimension {}", basis.len())));
    }
    match proportional(&basis[0], &inv.poly) {
        Some(lambda) => Ok((true, format!("dimension 1, lambda = {lambda}"))),
        None => Ok((false, "dimension 1, not proportional".into())),
    }
}

fn jacobian_independence(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let polys: Vec<MultiPoly> = claim
        .args
        .iter()
        .map(|id| ctx.catalog.invariant(id).map(|inv| inv.poly.clone()))
        .collect::<Result<_>>()?;
    let ok = jacobian_independent(&polys)?;
    Ok((ok, if ok { "independent".into() } else { "dependent".into() }))
}

// --- geometry checkers --------------------------------------------------

const EXACT_TOL: f64 = 1e-12;
const LANDMARK_TOL: f64 = 1e-10;

fn random_qubit(rng: &mut ChaCha8Rng) -> QubitState {
    loop {
        let s = QubitState::new(
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        );
        if s.norm() > 1e-3 {
            return s.normalized().expect("nonzero qubit state");
        }
    }
}

fn random_quartit(rng: &mut ChaCha8Rng) -> QuartitState {
    loop {
        let amps = [
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        ];
        let s = QuartitState::new(amps);
        if s.norm() > 1e-3 {
            return s.normalized().expect("nonzero quartit state");
        }
    }
}

fn sic_overlaps_claim() -> Outcome {
    let fid = qgeom::sic_fiducial();
    let overlaps = qgeom::sic_overlaps(&fid);
    let mut max_dev = 0.0f64;
    for (i, row) in overlaps.iter().enumerate() {
        for (j, &o) in row.iter().enumerate() {
            let want = if i == j { 1.0 } else { 1.0 / 3.0 };
            max_dev = max_dev.max((o - want).abs());
        }
    }
    Ok((
        max_dev <= EXACT_TOL,
        format!("max deviation from 1/3 pattern {max_dev:e}"),
    ))
}

fn bloch_landmarks() -> Outcome {
    let rt = std::f64::consts::FRAC_1_SQRT_2;
    let cases = [
        (QubitState::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)), (0.0, 0.0, 1.0)),
        (QubitState::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)), (0.0, 0.0, -1.0)),
        (QubitState::new(Complex64::new(rt, 0.0), Complex64::new(rt, 0.0)), (1.0, 0.0, 0.0)),
        (QubitState::new(Complex64::new(rt, 0.0), Complex64::new(0.0, rt)), (0.0, 1.0, 0.0)),
    ];
    let mut max_dev = 0.0f64;
    for (state, (xi, eta, zeta)) in cases {
        let b = qgeom::bloch_map(&state)?;
        max_dev = max_dev
            .max((b.xi - xi).abs())
            .max((b.eta - eta).abs())
            .max((b.zeta - zeta).abs());
    }
    Ok((max_dev <= LANDMARK_TOL, format!("landmarks within {max_dev:e}")))
}

fn stereo_roundtrip() -> Outcome {
    let north = qgeom::stereographic(&qgeom::BlochVector { xi: 0.0, eta: 0.0, zeta: 1.0 });
    if !north.is_infinity() {
        return Ok((false, "north pole did not map to infinity".into()));
    }
    let south = qgeom::stereographic(&qgeom::BlochVector { xi: 0.0, eta: 0.0, zeta: -1.0 });
    if south.is_infinity() || south.value().norm() > EXACT_TOL {
        return Ok((false, "south pole did not map to zero".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x57E6E0);
    let mut max_dev = 0.0f64;
    for _ in 0..100 {
        let b = qgeom::bloch_map(&random_qubit(&mut rng))?;
        let back = qgeom::inverse_stereographic(&qgeom::stereographic(&b));
        max_dev = max_dev
            .max((b.xi - back.xi).abs())
            .max((b.eta - back.eta).abs())
            .max((b.zeta - back.zeta).abs());
    }
    Ok((
        max_dev <= 1e-9,
        format!("poles exact, 100 round-trips within {max_dev:e}"),
    ))
}

fn hopf_norms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x40F9);
    let mut max_dev = 0.0f64;
    for _ in 0..1000 {
        let b = qgeom::bloch_map(&random_qubit(&mut rng))?;
        max_dev = max_dev.max((b.norm() - 1.0).abs());
        let p = qgeom::second_hopf(&random_quartit(&mut rng))?;
        max_dev = max_dev.max((p.norm() - 1.0).abs());
    }
    Ok((
        max_dev <= EXACT_TOL,
        format!("1000 states, unit norms within {max_dev:e}"),
    ))
}

fn point_dev(p: &S4Point, want: (f64, f64, f64, f64, f64)) -> f64 {
    (p.xi - want.0)
        .abs()
        .max((p.eta - want.1).abs())
        .max((p.u - want.2).abs())
        .max((p.v - want.3).abs())
        .max((p.zeta - want.4).abs())
}

fn hopf_landmarks() -> Outcome {
    let rt = std::f64::consts::FRAC_1_SQRT_2;
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let half = Complex64::new(rt, 0.0);
    let mut max_dev = 0.0f64;
    // |00>: north pole of the 4-sphere
    let p = qgeom::second_hopf(&QuartitState::new([one, zero, zero, zero]))?;
    max_dev = max_dev.max(point_dev(&p, (0.0, 0.0, 0.0, 0.0, 1.0)));
    // Bell pair (|00> + |11>)/sqrt(2): all entanglement in u
    let p = qgeom::second_hopf(&QuartitState::new([half, zero, zero, half]))?;
    max_dev = max_dev.max(point_dev(&p, (0.0, 0.0, 1.0, 0.0, 0.0)));
    // |+0>: product state, u = v = 0
    let p = qgeom::second_hopf(&QuartitState::new([half, zero, half, zero]))?;
    max_dev = max_dev.max(point_dev(&p, (1.0, 0.0, 0.0, 0.0, 0.0)));
    Ok((
        max_dev <= LANDMARK_TOL,
        format!("landmarks within {max_dev:e}"),
    ))
}

fn quat_agrees() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9047);
    let mut max_dev = 0.0f64;
    for _ in 0..200 {
        let s = random_quartit(&mut rng);
        let direct = qgeom::second_hopf(&s)?;
        let viaq = qgeom::second_hopf_quaternion(&s)?;
        max_dev = max_dev.max(point_dev(&direct, (viaq.xi, viaq.eta, viaq.u, viaq.v, viaq.zeta)));
    }
    Ok((
        max_dev <= EXACT_TOL,
        format!("200 states, images agree within {max_dev:e}"),
    ))
}

fn state_from_quaternions(q1: &Quaternion, q2: &Quaternion) -> QuartitState {
    QuartitState::new([
        Complex64::new(q1.w, q1.x),
        Complex64::new(q1.y, q1.z),
        Complex64::new(q2.w, q2.x),
        Complex64::new(q2.y, q2.z),
    ])
}

fn fiber_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xF1BE);
    let mut max_dev = 0.0f64;
    for _ in 0..100 {
        let s = random_quartit(&mut rng);
        let (q1, q2) = qgeom::quaternion_pair(&s);
        let u = Quaternion {
            w: rng.gen_range(-1.0..1.0),
            x: rng.gen_range(-1.0..1.0),
            y: rng.gen_range(-1.0..1.0),
            z: rng.gen_range(-1.0..1.0),
        };
        let n = (u.w * u.w + u.x * u.x + u.y * u.y + u.z * u.z).sqrt();
        if n < 1e-3 {
            continue;
        }
        let unit = Quaternion { w: u.w / n, x: u.x / n, y: u.y / n, z: u.z / n };
        let moved = state_from_quaternions(&q1.mul(&unit), &q2.mul(&unit));
        let a = qgeom::second_hopf(&s)?;
        let b = qgeom::second_hopf(&moved)?;
        max_dev = max_dev.max(point_dev(&a, (b.xi, b.eta, b.u, b.v, b.zeta)));
    }
    Ok((
        max_dev <= 1e-9,
        format!("fiber action shifts the image by at most {max_dev:e}"),
    ))
}

fn s_rows_entangled(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let m = &ctx.catalog.gate(arg(claim, 0)?)?.matrix;
    if m.nrows() != 4 {
        return Err(Error::DimensionMismatch("expected a 4x4 gate".into()));
    }
    let mut rows = Vec::new();
    let mut cols = Vec::new();
    let cm = m.to_complex();
    for i in 0..4 {
        let row =
            QuartitState::new([cm[4 * i], cm[4 * i + 1], cm[4 * i + 2], cm[4 * i + 3]])
                .normalized()?;
        rows.push(qgeom::entanglement(&row, LANDMARK_TOL).c);
        let col =
            QuartitState::new([cm[i], cm[4 + i], cm[8 + i], cm[12 + i]]).normalized()?;
        cols.push(qgeom::entanglement(&col, LANDMARK_TOL).c);
    }
    let ok = rows.iter().all(|c| (c - 1.0).abs() <= LANDMARK_TOL)
        && cols.iter().all(|c| c.abs() <= LANDMARK_TOL);
    let fmt = |v: &Vec<f64>| {
        v.iter()
            .map(|c| format!("{c:.3}"))
            .collect::<Vec<_>>()
            .join(",")
    };
    Ok((
        ok,
        format!("row concurrences {}; column concurrences {}", fmt(&rows), fmt(&cols)),
    ))
}

fn hopf_zeta_printed() -> Outcome {
    // Unit state with complex first amplitude: (i, 1, 0, 0)/sqrt(2).
    let rt = std::f64::consts::FRAC_1_SQRT_2;
    let amps = [
        Complex64::new(0.0, rt),
        Complex64::new(rt, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
    ];
    let s = QuartitState::new(amps);
    let corrected = qgeom::second_hopf(&s)?;
    // Printed final coordinate: squares without moduli.
    let printed_zeta = (amps[0] * amps[0] + amps[1] * amps[1]
        - amps[2] * amps[2]
        - amps[3] * amps[3])
        .re;
    let printed = S4Point {
        xi: corrected.xi,
        eta: corrected.eta,
        u: corrected.u,
        v: corrected.v,
        zeta: printed_zeta,
    };
    let ok = (printed.norm() - 1.0).abs() <= LANDMARK_TOL;
    Ok((
        ok,
        format!(
            "printed coordinate gives |p| = {} on a unit state (corrected gives {})",
            printed.norm(),
            corrected.norm()
        ),
    ))
}

fn triple_gates(ctx: &ClaimContext, claim: &ClaimDef, from: usize) -> Result<Vec<CycMatrix>> {
    (from..from + 3)
        .map(|i| Ok(ctx.catalog.gate(arg(claim, i)?)?.matrix.clone()))
        .collect()
}

fn eigenbasis_report(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let gate = ctx.catalog.gate(arg(claim, 0)?)?.matrix.clone();
    let triple = triple_gates(ctx, claim, 1)?;
    let relation = qgeom::eigenbasis_relation(&gate, &triple)?;
    Ok((true, format!("relation: {relation}")))
}

fn triple_eigenbasis_entangled(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let triple = triple_gates(ctx, claim, 0)?;
    let basis = qgeom::simultaneous_eigenbasis(&triple)?;
    if basis.len() != 4 {
        return Ok((false, format!("{} common eigenvectors", basis.len())));
    }
    let mut cs = Vec::new();
    for v in &basis {
        let amps = qgeom::to_complex_vec(v);
        let s = QuartitState::new([amps[0], amps[1], amps[2], amps[3]]).normalized()?;
        cs.push(qgeom::entanglement(&s, LANDMARK_TOL).c);
    }
    let ok = cs.iter().all(|c| (c - 1.0).abs() <= LANDMARK_TOL);
    Ok((
        ok,
        format!(
            "4 common eigenvectors, concurrences {}",
            cs.iter().map(|c| format!("{c:.3}")).collect::<Vec<_>>().join(",")
        ),
    ))
}

// --- root and lattice checkers ------------------------------------------

fn root_proportional(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let points = ctx.catalog.pointset(arg(claim, 0)?)?;
    let inv = ctx.catalog.invariant(arg(claim, 1)?)?;
    let rp = qgeom::root_polynomial(&points.points)?;
    match proportional(&rp, &inv.poly) {
        Some(lambda) => Ok((true, format!("lambda = {lambda}"))),
        None => Ok((false, "not proportional".into())),
    }
}

fn e8_basis_valid() -> Outcome {
    qgeom::e8_basis()?;
    Ok((true, "Gram determinant 1".into()))
}

fn e8_members() -> Outcome {
    use num_rational::BigRational;
    let frac = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    let cases: [(&[i64; 8], i64, bool); 4] = [
        (&[2, 2, 0, 0, 0, 0, 0, 0], 2, true),  // (1,1,0,...)
        (&[1, 1, 1, 1, 1, 1, 1, 1], 2, true),  // all halves
        (&[2, 0, 0, 0, 0, 0, 0, 0], 2, false), // odd coordinate sum
        (&[2, 1, 1, 1, 1, 1, 1, 1], 2, false), // mixed integrality
    ];
    let mut got = Vec::new();
    let mut ok = true;
    for (nums, den, want) in cases {
        let v: Vec<BigRational> = nums.iter().map(|&n| frac(n, den)).collect();
        let m = qgeom::e8_member(&v);
        ok &= m == want;
        got.push(m.to_string());
    }
    Ok((ok, format!("membership pattern {}", got.join(","))))
}

fn e8_preserved_by(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let m = &ctx.catalog.gate(arg(claim, 0)?)?.matrix;
    let ok = qgeom::e8_preserved(m)?;
    Ok((
        ok,
        if ok { "lattice preserved".into() } else { "image leaves the lattice".into() },
    ))
}

fn closure_cap_exceeded(ctx: &ClaimContext, claim: &ClaimDef) -> Outcome {
    let def = ctx.catalog.group(arg(claim, 0)?)?;
    match closure(&def.generators, ctx.options.cap) {
        Err(Error::CapExceeded { cap }) => Ok((true, format!("cap of {cap} exceeded"))),
        Ok(c) => Ok((false, format!("closed with {} elements", c.order()))),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_ctx() -> ClaimContext {
        ClaimContext::with_defaults().unwrap()
    }

    #[test]
    fn glob_patterns() {
        assert!(glob_match("*", "ORDER-P2"));
        assert!(glob_match("ORDER-*", "ORDER-P2"));
        assert!(glob_match("*-P2", "ORDER-P2"));
        assert!(glob_match("ORDER-P2", "ORDER-P2"));
        assert!(!glob_match("ORDER-*", "CENTER-P2"));
        assert!(!glob_match("ORDER", "ORDER-P2"));
    }

    #[test]
    fn order_claim_passes_and_caches() {
        let ctx = small_ctx();
        let r = run_claim(&ctx, "ORDER-U4");
        assert_eq!(r.status, Status::Pass);
        assert_eq!(r.computed, "24");
        // second run reuses the cached closure
        let r2 = run_claim(&ctx, "ORDER-U4");
        assert_eq!(r2.status, Status::Pass);
    }

    #[test]
    fn known_discrepancy_reports_discrepancy() {
        let ctx = small_ctx();
        let r = run_claim(&ctx, "REL-KAPPA-PRINTED");
        assert_eq!(r.status, Status::Discrepancy);
        assert!(r.computed.contains("nonzero remainder"));
        let ok = run_claim(&ctx, "REL-KLEIN");
        assert_eq!(ok.status, Status::Pass);
        assert_eq!(ok.computed, "identically zero");
    }

    #[test]
    fn unknown_claim_fails_gracefully() {
        let ctx = small_ctx();
        let r = run_claim(&ctx, "NO-SUCH-CLAIM");
        assert_eq!(r.status, Status::Fail);
        assert!(r.computed.contains("checker error"));
    }

    #[test]
    fn geometry_claims_pass() {
        let ctx = small_ctx();
        for id in ["GEOM-SIC", "GEOM-BLOCH", "GEOM-BELL", "GEOM-QUAT"] {
            let r = run_claim(&ctx, id);
            assert_eq!(r.status, Status::Pass, "{id}: {}", r.computed);
        }
        let r = run_claim(&ctx, "HOPF-ZETA-PRINTED");
        assert_eq!(r.status, Status::Discrepancy);
    }

    #[test]
    fn filtered_run_is_sorted() {
        let ctx = small_ctx();
        let results = run_claims(&ctx, Some("MSYM-*"));
        let ids: Vec<&str> = results.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["MSYM-2222", "MSYM-422", "MSYM-44"]);
        assert!(results.iter().all(|r| r.status == Status::Pass));
    }

    #[test]
    fn printed_octit_invariant_is_not_invariant() {
        let ctx = small_ctx();
        let printed = ctx.catalog.invariant("i8_printed").unwrap();
        let group = ctx.catalog.group("u36").unwrap();
        // X8 and the parity gate fix it; the Bell-type gate does not.
        assert!(crate::poly::is_invariant(&printed.poly, &group.generators[..2]).unwrap());
        assert!(!crate::poly::is_invariant(&printed.poly, &group.generators).unwrap());
    }
}
