//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rddi_core::collective::{
    default_time_grid, diagonalize, evolve, lifetime, linear_time_grid, mode_weights, phase_imprinted_state, propagate,
    symmetric_rates, CouplingMatrix, DEFAULT_CONDITION_LIMIT,
};
use rddi_core::kernels::{f2d, g2d, quadrature_f2d, PairGeometry, ReservoirKind};
use rddi_core::lattice::{AtomSites, LatticeSpec, Vec2};
use rddi_core::oracles::{check_dynamics, check_pv_identities, DynamicsCheck};
use rddi_core::specfun::QuadratureSpec;

type Outcome = Result<String, String>;

fn verdict(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn sites(spec: &LatticeSpec<f64>) -> AtomSites<f64> {
    AtomSites::build(spec).expect("valid lattice")
}

fn matrix(spec: &LatticeSpec<f64>, kind: ReservoirKind) -> (AtomSites<f64>, CouplingMatrix<f64>) {
    let s = sites(spec);
    let m = CouplingMatrix::assemble(&s, spec.polarization, kind).expect("assembly");
    (s, m)
}

fn gamma_n(spec: &LatticeSpec<f64>, kind: ReservoirKind) -> f64 {
    let (s, m) = matrix(spec, kind);
    symmetric_rates(&m, &s, spec.drive).expect("rates").gamma_n
}

fn kernel_correctness() -> Outcome {
    let spec = QuadratureSpec::new(1e-14, 1e-14).with_max_subdivisions(2000);
    let mut worst = (0.0f64, 0.0, 0.0);
    let mut count = 0;
    for k in 0..=199 {
        let xi = 0.1 + k as f64 * (50.0 - 0.1) / 199.0;
        for c2 in [0.0, 0.25, 0.5, 1.0] {
            let g = PairGeometry::new(xi, c2).unwrap();
            let q = quadrature_f2d(g, &spec).map_err(|e| e.to_string())?;
            let err = (f2d(g) - q).abs();
            if err > worst.0 {
                worst = (err, xi, c2);
            }
            count += 1;
        }
    }
    verdict(
        worst.0 <= 1e-8,
        format!("{count} points, max |f - quad| = {:.2e} at xi={:.3}, c2={} (tol 1e-8)", worst.0, worst.1, worst.2),
    )
}

fn pv_identities() -> Outcome {
    let reports = check_pv_identities(&[0.5, 1.0, 2.0, 5.0, 10.0]).map_err(|e| e.to_string())?;
    let worst = reports.iter().max_by(|a, b| a.abs_err.partial_cmp(&b.abs_err).unwrap()).unwrap();
    let failed: Vec<String> =
        reports.iter().filter(|r| !r.pass).map(|r| format!("{}@{}", r.identity, r.parameters)).collect();
    verdict(
        failed.is_empty(),
        format!(
            "{} reports, worst {} at {} err {:.2e} (tol 1e-5){}",
            reports.len(),
            worst.identity,
            worst.parameters,
            worst.abs_err,
            if failed.is_empty() { String::new() } else { format!("; failed: {}", failed.join(", ")) }
        ),
    )
}

fn near_field() -> Outcome {
    let xi = std::f64::consts::TAU * 0.01;
    let par = g2d(PairGeometry::new(xi, 1.0).unwrap()).unwrap().abs();
    let perp = g2d(PairGeometry::new(xi, 0.0).unwrap()).unwrap().abs();
    verdict(
        (par - 2.1).abs() <= 0.15 && (perp - 1.5).abs() <= 0.15,
        format!("|g| = {par:.4} (c2=1, want 2.1±0.15), {perp:.4} (c2=0, want 1.5±0.15)"),
    )
}

/// Envelope of `|f| ξ^p`: the maximum over each window of one period.
fn envelope_band(c2: f64, p: f64) -> (f64, f64) {
    let period = std::f64::consts::TAU;
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    let mut start = 50.0;
    while start + period <= 500.0 + 1e-9 {
        let peak = (0..=400)
            .map(|i| {
                let xi = start + period * i as f64 / 400.0;
                f2d(PairGeometry::new(xi, c2).unwrap()).abs() * xi.powf(p)
            })
            .fold(0.0, f64::max);
        lo = lo.min(peak);
        hi = hi.max(peak);
        start += period;
    }
    (lo, hi)
}

fn long_range() -> Outcome {
    let (lo1, hi1) = envelope_band(1.0, 1.5);
    let (lo0, hi0) = envelope_band(0.0, 0.5);
    let r1 = hi1 / lo1;
    let r0 = hi0 / lo0;
    verdict(
        r1 <= 3.0 && r0 <= 3.0 && lo1 > 0.0 && lo0 > 0.0,
        format!(
            "per-period envelope of |f| xi^1.5 (c2=1) in [{lo1:.3}, {hi1:.3}] ratio {r1:.3}; |f| xi^0.5 (c2=0) in [{lo0:.3}, {hi0:.3}] ratio {r0:.3} (max 3)"
        ),
    )
}

fn fit_exponent(nx: usize) -> f64 {
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    let nzs: Vec<usize> = (2..=30).collect();
    for &nz in &nzs {
        let g = gamma_n(&LatticeSpec::new(nx, nz, 1.0), ReservoirKind::TwoD);
        let (x, y) = ((nz as f64).ln(), g.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let n = nzs.len() as f64;
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

fn scaling_exponents() -> Outcome {
    let e2 = fit_exponent(2);
    let e30 = fit_exponent(30);
    verdict(
        (e2 - 0.65).abs() <= 0.05 && (e30 - 0.97).abs() <= 0.03,
        format!("exponent {e2:.4} at Nx=2 (want 0.65±0.05), {e30:.4} at Nx=30 (want 0.97±0.03)"),
    )
}

fn row_subradiance() -> Outcome {
    let row = |nx: usize| LatticeSpec::new(nx, 1, 40.0).with_polarization(Vec2::z_hat());
    let sub: Vec<usize> = (1..=40).filter(|&nx| gamma_n(&row(nx), ReservoirKind::TwoD) < 1.0).collect();
    let g2 = gamma_n(&row(40), ReservoirKind::TwoD);
    let g3 = gamma_n(&row(40), ReservoirKind::ThreeD);
    let excess = 100.0 * (g3 / g2 - 1.0);
    verdict(
        sub.len() >= 5 && (excess - 15.0).abs() <= 10.0,
        format!(
            "Gamma_N < 1 for {} of Nx in 1..=40 (first {:?}); at Nx=40 2D {g2:.4}, 3D {g3:.4}, excess {excess:.1}% (want 15±10)",
            sub.len(),
            sub.first()
        ),
    )
}

fn decay_spectrum(xi: f64, kind: ReservoirKind) -> Vec<f64> {
    let (_, m) = matrix(&LatticeSpec::new(10, 10, xi), kind);
    diagonalize(&m).expect("spectrum").decay_constants()
}

fn lattice_spectrum() -> Outcome {
    let s10 = decay_spectrum(10.0, ReservoirKind::TwoD);
    let s1 = decay_spectrum(1.0, ReservoirKind::TwoD);
    let s3d = decay_spectrum(10.0, ReservoirKind::ThreeD);
    let plateau = s3d.iter().filter(|&&g| (0.5..=1.5).contains(&g)).count() as f64 / s3d.len() as f64;
    let (min1, max1) = (s1[0], s1[s1.len() - 1]);
    verdict(
        s10[0] < 1e-2 && max1 > 1.0 && min1 < 1.0 && plateau >= 0.8,
        format!(
            "xi=10 min {:.3e} (< 1e-2); xi=1 spans [{min1:.3e}, {max1:.3}]; 3D xi=10 {:.0}% of modes in [0.5, 1.5] (>= 80%)",
            s10[0],
            100.0 * plateau
        ),
    )
}

struct Weighted {
    decay: f64,
    weight: f64,
    label: usize,
}

fn mode_weightings() -> Outcome {
    let spec = LatticeSpec::new(10, 10, 1.0);
    let (s, m) = matrix(&spec, ReservoirKind::TwoD);
    let spectrum = diagonalize(&m).map_err(|e| e.to_string())?;
    let decay = spectrum.decay_constants();
    let grid = default_time_grid::<f64>();
    let mut lines = Vec::new();
    let mut ok = true;
    for mm in [5usize, 7] {
        let state = phase_imprinted_state(&s, spec.drive, mm).unwrap();
        let w = mode_weights(&spectrum, &state).unwrap();
        let mut modes: Vec<Weighted> = w
            .iter()
            .enumerate()
            .map(|(l, w)| Weighted { decay: decay[l], weight: w.norm_sqr(), label: l + 1 })
            .collect();
        modes.sort_by(|a, b| b.weight.partial_cmp(&a.weight).unwrap());
        let ts = evolve(&spectrum, &state, &grid, DEFAULT_CONDITION_LIMIT).map_err(|e| e.to_string())?;
        let rises = ts.intensity.windows(2).filter(|p| p[1] > p[0] * (1.0 + 1e-9)).count();
        let near = |g: f64, target: f64| g >= target / 2.0 && g <= target * 2.0;
        let pass = if mm == 5 {
            let top = &modes[..2];
            top.iter().any(|x| near(x.decay, 1e-4)) && top.iter().any(|x| near(x.decay, 4e-4))
        } else {
            near(modes[0].decay, 4e-3)
        };
        ok &= pass && rises > 0;
        let top: Vec<String> = modes[..3]
            .iter()
            .map(|x| format!("l={} G={:.3e} |w|^2={:.3}", x.label, x.decay, x.weight))
            .collect();
        lines.push(format!("m={mm}: {}; {} intensity rises", top.join(", "), rises));
    }
    verdict(ok, lines.join(" | "))
}

fn run_lifetime(drive: Vec2<f64>, mm: usize) -> Result<f64, String> {
    let spec = LatticeSpec::new(4, 20, 5.0).with_drive(drive).with_transverse_polarization();
    let (s, m) = matrix(&spec, ReservoirKind::TwoD);
    let spectrum = diagonalize(&m).map_err(|e| e.to_string())?;
    let state = phase_imprinted_state(&s, drive, mm).unwrap();
    let ts = evolve(&spectrum, &state, &default_time_grid(), DEFAULT_CONDITION_LIMIT).map_err(|e| e.to_string())?;
    lifetime(&ts).map_err(|e| e.to_string())
}

fn drive_lifetimes() -> Outcome {
    let z0 = run_lifetime(Vec2::z_hat(), 0)?;
    let x0 = run_lifetime(Vec2::x_hat(), 0)?;
    let z10 = run_lifetime(Vec2::z_hat(), 10)?;
    let x10 = run_lifetime(Vec2::x_hat(), 10)?;
    let r0 = z0 / x0;
    let r10 = z10 / x10;
    verdict(
        (0.25 / 1.5..=0.25 * 1.5).contains(&r0) && (50.0..=200.0).contains(&r10),
        format!(
            "m=0: t*(z)={z0:.4}, t*(x)={x0:.4}, ratio {r0:.3} (want 1/4 within x1.5); m=10: t*(z)={z10:.3}, t*(x)={x10:.4}, ratio {r10:.1} (want 100 within x2)"
        ),
    )
}

fn dynamics_oracle() -> Outcome {
    let cases: Vec<(LatticeSpec<f64>, ReservoirKind, usize, f64)> = vec![
        (LatticeSpec::new(1, 1, 1.0), ReservoirKind::TwoD, 0, 10.0),
        (LatticeSpec::new(2, 1, 1.0), ReservoirKind::TwoD, 0, 10.0),
        (LatticeSpec::new(4, 4, 1.0), ReservoirKind::TwoD, 3, 20.0),
        (LatticeSpec::new(3, 5, 2.0), ReservoirKind::ThreeD, 4, 20.0),
        (LatticeSpec::new(6, 1, 0.8), ReservoirKind::OneD, 1, 20.0),
        (LatticeSpec::new(8, 8, 1.0), ReservoirKind::TwoD, 5, 30.0),
        (LatticeSpec::new(4, 16, 5.0).with_drive(Vec2::x_hat()).with_transverse_polarization(), ReservoirKind::TwoD, 10, 30.0),
    ];
    let mut worst: f64 = 0.0;
    let mut all = true;
    for (spec, kind, mm, horizon) in &cases {
        let (s, m) = matrix(spec, *kind);
        let state = phase_imprinted_state(&s, spec.drive, *mm).unwrap();
        let r = check_dynamics(&m, &state, *horizon, &DynamicsCheck::default()).map_err(|e| e.to_string())?;
        all &= r.pass;
        worst = worst.max(r.oracle);
    }
    verdict(all && worst <= 1e-7, format!("{} lattices up to N=64, max |b_ode - b_spectral| = {worst:.2e} (tol 1e-7)", cases.len()))
}

fn structural() -> Outcome {
    let mut runner = TestRunner::new(Config { cases: 64, failure_persistence: None, ..Config::default() });
    let strategy = (1usize..=6, 1usize..=6, 0.3f64..6.0, 0usize..3, 0.0f64..std::f64::consts::TAU, any::<u32>());
    let result = runner.run(&strategy, |(nx, nz, xi, kind, angle, seed)| {
        let kind = [ReservoirKind::OneD, ReservoirKind::TwoD, ReservoirKind::ThreeD][kind];
        // a waveguide only hosts a line of atoms
        let nz = if kind == ReservoirKind::OneD { 1 } else { nz };
        let drive = Vec2::from_angle(angle);
        let spec = LatticeSpec::new(nx, nz, xi).with_drive(drive).with_transverse_polarization();
        let (s, m) = matrix(&spec, kind);
        let n = s.len();
        prop_assert!(m.symmetry_residual() <= 1e-14, "symmetry {}", m.symmetry_residual());
        let min_eig = m.dissipative_min_eigenvalue();
        prop_assert!(min_eig >= -1e-10 * n as f64, "Re M eigenvalue {min_eig}");
        let spectrum = diagonalize(&m).unwrap();
        for v in &spectrum.values {
            prop_assert!(v.re <= 1e-10, "Re lambda {}", v.re);
        }
        let mm = seed as usize % (n + 1);
        let state = phase_imprinted_state(&s, drive, mm).unwrap();
        let total: num_complex::Complex<f64> = mode_weights(&spectrum, &state).unwrap().iter().sum();
        prop_assert!((total - 1.0).norm() <= 1e-10, "sum w = {total}");
        for other in 0..n {
            let b = phase_imprinted_state(&s, drive, other).unwrap();
            let o = state.overlap(&b).unwrap();
            let want = if other == mm % n { 1.0 } else { 0.0 };
            prop_assert!((o - want).norm() <= 1e-12, "overlap {mm},{other} = {o}");
        }
        let times = linear_time_grid(0.0, 20.0, 101).unwrap();
        let norms: Vec<f64> = propagate(&spectrum, &state, &times, DEFAULT_CONDITION_LIMIT)
            .unwrap()
            .iter()
            .map(|b| b.norm())
            .collect();
        prop_assert!((norms[0] - 1.0).abs() <= 1e-12);
        for w in norms.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12, "norm rose {} -> {}", w[0], w[1]);
        }
        Ok(())
    });
    match result {
        Ok(()) => Ok("64 random lattices: symmetry, PSD Re M, Re lambda <= 0, sum w = 1, orthonormal basis, monotone norm".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("kernel correctness", kernel_correctness),
        ("PV identities", pv_identities),
        ("near-field shift magnitudes", near_field),
        ("long-range scaling", long_range),
        ("Nz scaling exponents", scaling_exponents),
        ("subradiant rows", row_subradiance),
        ("10x10 decay spectrum", lattice_spectrum),
        ("mode weightings and beating", mode_weightings),
        ("drive-direction lifetimes", drive_lifetimes),
        ("dynamics oracle", dynamics_oracle),
        ("structural invariants", structural),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name} [{secs:.1}s]: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name} [{secs:.1}s]: {detail}");
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
