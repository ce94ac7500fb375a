use std::fmt;

use rayon::prelude::*;
use rddi_core::collective::{
    diagonalize, evolve, lifetime, linear_time_grid, log_time_grid, mode_weights, phase_imprinted_state,
    symmetric_rates, CouplingMatrix,
};
use rddi_core::kernels::{coupling, PairGeometry, ReservoirKind};
use rddi_core::lattice::{AtomSites, IndexOrder, LatticeSpec, Vec2};
use rddi_core::oracles::{
    check_bessel_identities, check_dynamics, check_kernels, check_pv_identities, render_table, DynamicsCheck,
};
use rddi_core::{Error, OracleReport};

use crate::config::{Command, Format, RunConfig};
use crate::grid::{parse_int_grid, parse_real_grid};
use crate::table::{Cell, Table};

#[derive(Debug)]
pub enum Failure {
    /// Malformed configuration; exit status 2.
    Usage(String),
    /// Numerical failure or a failed oracle; exit status 1.
    Numerical(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidLattice(_)
            | Error::InvalidPhaseIndex { .. }
            | Error::InvalidTimeGrid(_)
            | Error::InvalidQuadrature(_)
            | Error::CoincidentSites(..)
            | Error::Parse(_) => Failure::Usage(e.to_string()),
            other => Failure::Numerical(other.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

pub struct Output {
    pub table: Table,
    /// Rendered text for the `table` format.
    pub text: Option<String>,
    /// Diagnostics for stderr.
    pub notes: Vec<String>,
    /// Reported after the output is written.
    pub failure: Option<Failure>,
}

impl Output {
    fn plain(table: Table) -> Self {
        Self { table, text: None, notes: Vec::new(), failure: None }
    }
}

fn required<'a, T>(v: &'a Option<T>, name: &str) -> Result<&'a T, Failure> {
    v.as_ref().ok_or_else(|| usage(format!("missing setting '{name}'")))
}

fn direction(text: &str) -> Result<Vec2<f64>, Failure> {
    match text.trim().to_ascii_lowercase().as_str() {
        "x" => Ok(Vec2::x_hat()),
        "z" => Ok(Vec2::z_hat()),
        other => other
            .parse::<f64>()
            .ok()
            .filter(|d| d.is_finite())
            .map(|deg| Vec2::from_angle(deg.to_radians()))
            .ok_or_else(|| usage(format!("direction '{other}' is not x, z or an angle in degrees"))),
    }
}

struct Lattice {
    nx: Vec<usize>,
    nz: Vec<usize>,
    xi: Vec<f64>,
    kind: ReservoirKind,
    /// `None` means transverse to the drive.
    pol: Option<Vec2<f64>>,
    drive: Vec2<f64>,
    order: IndexOrder,
}

impl Lattice {
    fn resolve(cfg: &RunConfig) -> Result<Self, Failure> {
        let pol = required(&cfg.pol, "pol")?;
        Ok(Self {
            nx: parse_int_grid(required(&cfg.nx, "nx")?).map_err(usage)?,
            nz: parse_int_grid(required(&cfg.nz, "nz")?).map_err(usage)?,
            xi: parse_real_grid(required(&cfg.xi, "xi")?).map_err(usage)?,
            kind: required(&cfg.kind, "kind")?.parse()?,
            pol: if pol.trim().eq_ignore_ascii_case("transverse") { None } else { Some(direction(pol)?) },
            drive: direction(required(&cfg.klong, "klong")?)?,
            order: required(&cfg.order, "order")?.parse()?,
        })
    }

    fn spec(&self, nx: usize, nz: usize, xi: f64) -> LatticeSpec<f64> {
        let spec = LatticeSpec::new(nx, nz, xi).with_drive(self.drive).with_order(self.order);
        match self.pol {
            Some(p) => spec.with_polarization(p),
            None => spec.with_transverse_polarization(),
        }
    }

    fn single(&self) -> Result<LatticeSpec<f64>, Failure> {
        match (self.nx.as_slice(), self.nz.as_slice(), self.xi.as_slice()) {
            ([nx], [nz], [xi]) => Ok(self.spec(*nx, *nz, *xi)),
            _ => Err(usage("this command takes a single nx, nz and xi")),
        }
    }

    fn build(&self, spec: &LatticeSpec<f64>) -> Result<(AtomSites<f64>, CouplingMatrix<f64>), Failure> {
        let sites = AtomSites::build(spec)?;
        let m = CouplingMatrix::assemble(&sites, spec.polarization, self.kind)?;
        Ok((sites, m))
    }
}

pub fn execute(cfg: &RunConfig) -> Result<Output, Failure> {
    let format = cfg.format.unwrap_or(Format::Csv);
    let command = *required(&cfg.command, "command")?;
    if format == Format::Table && command != Command::Oracle {
        return Err(usage("the table format is only available for oracle"));
    }
    match command {
        Command::Kernel => kernel(cfg),
        Command::Symmetric => symmetric(cfg),
        Command::Spectrum => spectrum(cfg),
        Command::Dynamics => dynamics(cfg),
        Command::Oracle => oracle(cfg),
    }
}

fn kernel(cfg: &RunConfig) -> Result<Output, Failure> {
    let kind: ReservoirKind = required(&cfg.kind, "kind")?.parse()?;
    let xi_max = *required(&cfg.xi_max, "xi-max")?;
    let steps = *required(&cfg.steps, "steps")?;
    if !(xi_max > 0.0) || !xi_max.is_finite() || steps == 0 {
        return Err(usage("kernel needs xi-max > 0 and steps >= 1"));
    }
    let mut pols = Vec::new();
    for item in required(&cfg.pol, "pol")?.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (label, c2) = match item.to_ascii_lowercase().as_str() {
            "parallel" | "par" => ("par".to_string(), 1.0),
            "perpendicular" | "perp" => ("perp".to_string(), 0.0),
            other => {
                let c2: f64 = other.parse().map_err(|_| usage(format!("polarization '{other}' is not parallel, perpendicular or a c² value")))?;
                (format!("c2_{other}"), c2)
            }
        };
        pols.push((label, c2));
    }
    if pols.is_empty() {
        return Err(usage("kernel needs at least one polarization"));
    }
    let mut columns = vec!["xi".to_string()];
    for (label, _) in &pols {
        columns.push(format!("f_{label}"));
        columns.push(format!("g_{label}"));
    }
    let rows: Vec<Vec<Cell>> = (1..=steps)
        .into_par_iter()
        .map(|k| {
            let xi = xi_max * k as f64 / steps as f64;
            let mut row = vec![Cell::Real(xi)];
            for (_, c2) in &pols {
                let c = coupling(kind, PairGeometry::new(xi, *c2)?)?;
                row.push(c.dissipative.into());
                row.push(c.coherent.into());
            }
            Ok(row)
        })
        .collect::<Result<_, Error>>()?;
    Ok(Output::plain(Table { columns, rows }))
}

fn symmetric(cfg: &RunConfig) -> Result<Output, Failure> {
    let lat = Lattice::resolve(cfg)?;
    let mut points = Vec::new();
    for &xi in &lat.xi {
        for &nx in &lat.nx {
            for &nz in &lat.nz {
                points.push((xi, nx, nz));
            }
        }
    }
    let rows: Vec<Vec<Cell>> = points
        .par_iter()
        .map(|&(xi, nx, nz)| {
            let spec = lat.spec(nx, nz, xi);
            let (sites, m) = lat.build(&spec)?;
            let r = symmetric_rates(&m, &sites, spec.drive)?;
            Ok(vec![Cell::Real(xi), nx.into(), nz.into(), r.gamma_n.into(), r.delta_n.into()])
        })
        .collect::<Result<_, Failure>>()?;
    Ok(Output::plain(Table { columns: ["xi", "Nx", "Nz", "Gamma_N", "Delta_N"].map(String::from).to_vec(), rows }))
}

fn phase_indices(text: &Option<String>, name: &str) -> Result<Vec<usize>, Failure> {
    match text {
        Some(t) => parse_int_grid(t).map_err(usage),
        None => Err(usage(format!("missing setting '{name}'"))),
    }
}

fn spectrum(cfg: &RunConfig) -> Result<Output, Failure> {
    let lat = Lattice::resolve(cfg)?;
    let spec = lat.single()?;
    let (sites, m) = lat.build(&spec)?;
    let spectrum = diagonalize(&m)?;
    let weights = match &cfg.weights {
        Some(_) => phase_indices(&cfg.weights, "weights")?,
        None => Vec::new(),
    };
    let limit = cfg.condition_limit.unwrap_or(rddi_core::collective::DEFAULT_CONDITION_LIMIT);
    if !weights.is_empty() && !(spectrum.condition <= limit) {
        return Err(Error::IllConditioned { condition: spectrum.condition, limit }.into());
    }
    let mut weight_columns = Vec::new();
    for &mm in &weights {
        let state = phase_imprinted_state(&sites, spec.drive, mm)?;
        weight_columns.push(mode_weights(&spectrum, &state)?);
    }
    let mut columns: Vec<String> = ["l", "Gamma_l", "omega_l"].map(String::from).to_vec();
    columns.extend(weights.iter().map(|mm| format!("weight_m{mm}")));
    let mut table = Table::new(columns);
    for (l, (g, w)) in spectrum.decay_constants().iter().zip(spectrum.frequencies()).enumerate() {
        let mut row = vec![Cell::from(l + 1), Cell::Real(*g), Cell::Real(w)];
        row.extend(weight_columns.iter().map(|col| Cell::Real(col[l].norm_sqr())));
        table.push(row);
    }
    let mut out = Output::plain(table);
    out.notes.push(format!("condition number of S: {:.3e}", spectrum.condition));
    out.notes.push(format!("eigen residual: {:.3e} (scale {:.3e})", spectrum.residual, spectrum.scale));
    Ok(out)
}

fn time_grid(cfg: &RunConfig) -> Result<Vec<f64>, Failure> {
    let (lo, hi) = (*required(&cfg.t_min, "t-min")?, *required(&cfg.t_max, "t-max")?);
    let points = *required(&cfg.points, "points")?;
    Ok(match required(&cfg.time_grid, "time-grid")?.as_str() {
        "log" => log_time_grid(lo, hi, points)?,
        "linear" => linear_time_grid(lo, hi, points)?,
        other => return Err(usage(format!("time grid '{other}' is not log or linear"))),
    })
}

fn dynamics(cfg: &RunConfig) -> Result<Output, Failure> {
    let lat = Lattice::resolve(cfg)?;
    let spec = lat.single()?;
    let ms = phase_indices(&cfg.m, "m")?;
    let times = time_grid(cfg)?;
    let limit = *required(&cfg.condition_limit, "condition-limit")?;
    let (sites, m) = lat.build(&spec)?;
    let spectrum = diagonalize(&m)?;
    let series = ms
        .par_iter()
        .map(|&mm| {
            let state = phase_imprinted_state(&sites, spec.drive, mm)?;
            Ok((mm, evolve(&spectrum, &state, &times, limit)?))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let mut table = Table::new(["m", "t", "intensity", "amplitude_re", "amplitude_im"]);
    let mut notes = Vec::new();
    for (mm, ts) in &series {
        for ((t, i), a) in ts.times.iter().zip(&ts.intensity).zip(&ts.amplitude) {
            table.push(vec![Cell::from(*mm), Cell::Real(*t), Cell::Real(*i), Cell::Real(a.re), Cell::Real(a.im)]);
        }
        notes.push(match lifetime(ts) {
            Ok(t) => format!("m={mm} lifetime {t:.6e}"),
            Err(e) => format!("m={mm} {e}"),
        });
    }
    Ok(Output { table, text: None, notes, failure: None })
}

fn oracle(cfg: &RunConfig) -> Result<Output, Failure> {
    let a = parse_real_grid(required(&cfg.a, "a")?).map_err(usage)?;
    let b = parse_real_grid(required(&cfg.b, "b")?).map_err(usage)?;
    if b.iter().any(|&v| v <= 0.0) {
        return Err(usage("principal-value points must be positive"));
    }
    let lat = Lattice::resolve(cfg)?;
    let spec = lat.single()?;
    let ms = phase_indices(&cfg.m, "m")?;
    let horizon = *required(&cfg.horizon, "horizon")?;
    let cap = *required(&cfg.dynamics_cap, "dynamics-cap")?;

    let mut reports: Vec<OracleReport> = Vec::new();
    let per_a: Vec<Vec<OracleReport>> =
        a.par_iter().map(|&v| check_bessel_identities(&[v])).collect::<Result<_, Error>>()?;
    reports.extend(per_a.into_iter().flatten());
    let per_b: Vec<Vec<OracleReport>> =
        b.par_iter().map(|&v| check_pv_identities(&[v])).collect::<Result<_, Error>>()?;
    reports.extend(per_b.into_iter().flatten());
    reports.extend(check_kernels::<f64>()?);
    let (sites, m) = lat.build(&spec)?;
    let opts = DynamicsCheck { cap, ..DynamicsCheck::default() };
    for &mm in &ms {
        let state = phase_imprinted_state(&sites, spec.drive, mm)?;
        let mut r = check_dynamics(&m, &state, horizon, &opts)?;
        r.parameters = format!("{};m={mm}", r.parameters);
        reports.push(r);
    }

    let mut table = Table::new(OracleReport::csv_header());
    for r in &reports {
        table.push(vec![
            Cell::Text(r.identity.clone()),
            Cell::Text(r.parameters.clone()),
            Cell::Real(r.closed_form),
            Cell::Real(r.oracle),
            Cell::Real(r.abs_err),
            Cell::Real(r.rel_err),
            Cell::Real(r.tolerance),
            Cell::Bool(r.pass),
            Cell::Text(r.diagnostic.clone().unwrap_or_default()),
        ]);
    }
    let failed = reports.iter().filter(|r| !r.pass).count();
    let failure = (failed > 0).then(|| Failure::Numerical(format!("{failed} of {} oracle checks failed", reports.len())));
    Ok(Output { table, text: Some(render_table(&reports)), notes: Vec::new(), failure })
}
