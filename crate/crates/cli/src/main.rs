//! `casimir`: finite-temperature Casimir free energy, force, energy and
//! entropy of ideal plates, with cross-validation commands.

mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use casimir_core::classical_box::{
    classical_shift_closed, classical_shift_quadrature, em_high_t_consistency, BoxPartition,
};
use casimir_core::expansion::{self, Regime};
use casimir_core::lattice::{self, physical_thermo, FieldKind, DEFAULT_TOLERANCE};
use casimir_core::orbits::{self, OrbitKind};
use casimir_core::selftest;
use casimir_core::units::{PlateGeometry, UnitMode, UnitSystem};

use output::{Cell, Format, Table};

#[derive(Parser, Debug)]
#[command(name = "casimir", version, about = "Casimir free energy of ideal plates at finite temperature")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Unit system for inputs and outputs (si: metres, kelvin, joules)
    #[arg(long, global = true, value_enum, env = "CASIMIR_UNITS", default_value = "natural")]
    units: Units,
    /// Target absolute error on reduced quantities
    #[arg(long, global = true, default_value_t = DEFAULT_TOLERANCE)]
    tolerance: f64,
    /// Output format
    #[arg(long, global = true, value_enum, default_value = "table")]
    format: Format,
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Units {
    Natural,
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Field {
    Em,
    Scalar,
}

#[derive(Args, Debug, Clone)]
struct Point {
    /// Plate separation
    #[arg(long)]
    l3: f64,
    /// Temperature (0 allowed)
    #[arg(long)]
    temperature: f64,
    /// Field: electromagnetic or a single scalar
    #[arg(long, value_enum, default_value = "em")]
    field: Field,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Interval,
    Cylinder,
    Box,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Free energy per area A/𝒜
    FreeEnergy(Point),
    /// Force per area F/𝒜 = −∂(A/𝒜)/∂l3 (negative is attractive)
    Force(Point),
    /// Energy per area
    Energy(Point),
    /// Entropy per area
    Entropy(Point),
    /// Reduced quantities over a grid of z = 2 l3/l_T
    Scan {
        #[arg(long)]
        zmin: f64,
        #[arg(long)]
        zmax: f64,
        #[arg(long, default_value_t = 81)]
        points: usize,
        #[arg(long, value_enum, default_value = "log")]
        spacing: Spacing,
        /// Add columns for the expansion branch of this order
        #[arg(long)]
        with_expansion: Option<usize>,
    },
    /// High- and low-temperature expansions against the lattice value
    Expansions {
        #[arg(long)]
        z: f64,
        #[arg(long, default_value_t = 0)]
        order: usize,
    },
    /// Lattice vs expansion vs Matsubara comparison matrix
    OracleCheck {
        /// Comma-separated z values (default: 0.1, 0.2, 0.5, 1, 2, 5, 10)
        #[arg(long, value_delimiter = ',')]
        z: Vec<f64>,
        /// Largest accepted relative deviation
        #[arg(long, default_value_t = 1e-10)]
        threshold: f64,
    },
    /// Classical wall-displacement shift ΔA/(k_BT𝒜) in a box of length L
    ClassicalBox {
        #[arg(long)]
        length: f64,
        #[arg(long)]
        l3: f64,
        #[arg(long, default_value_t = 32)]
        n_max: u64,
        #[arg(long, default_value_t = 1e-13)]
        quad_tolerance: f64,
    },
    /// Periodic orbits up to a maximum length
    Orbits {
        #[arg(long, value_enum, default_value = "cylinder")]
        kind: Kind,
        #[arg(long)]
        l3: f64,
        /// Thermal circumference (cylinder)
        #[arg(long)]
        lt: Option<f64>,
        #[arg(long)]
        l1: Option<f64>,
        #[arg(long)]
        l2: Option<f64>,
        #[arg(long)]
        max_length: f64,
    },
    /// Run the invariant suite
    Selftest,
}

enum Failure {
    Usage(String),
    Numeric(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Numeric(e)
    }
}

impl From<casimir_core::CasimirError> for Failure {
    fn from(e: casimir_core::CasimirError) -> Self {
        Failure::Numeric(e.into())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn unit_system(u: Units) -> UnitSystem {
    match u {
        Units::Natural => UnitSystem::from_mode(UnitMode::Natural),
        Units::Si => UnitSystem::from_mode(UnitMode::Si),
    }
}

fn field_kind(f: Field) -> FieldKind {
    match f {
        Field::Em => FieldKind::Electromagnetic,
        Field::Scalar => FieldKind::Scalar,
    }
}

#[derive(Clone, Copy)]
enum Quantity {
    FreeEnergy,
    Force,
    Energy,
    Entropy,
}

fn point(q: Quantity, p: &Point, common: &Common) -> Result<(Table, bool), Failure> {
    let units = unit_system(common.units);
    let geometry = PlateGeometry::unit_area(p.l3, p.temperature).map_err(|e| usage(e.to_string()))?;
    let r = physical_thermo(&geometry, &units, field_kind(p.field), common.tolerance)?;
    let (name, value, reduced) = match q {
        Quantity::FreeEnergy => ("free_energy", r.free_energy, r.reduced.a_hat),
        Quantity::Force => ("pressure", r.pressure, r.reduced.f_hat),
        Quantity::Energy => ("energy", r.energy, r.reduced.e_hat),
        Quantity::Entropy => ("entropy", r.entropy, r.reduced.s_hat),
    };
    let field_scale = match p.field {
        Field::Em => 1.0,
        Field::Scalar => 1.0 / orbits::em_scalar_factor(orbits::GeometryCase::Plates)? as f64,
    };
    let reduced_name = match q {
        Quantity::FreeEnergy => "a_hat",
        Quantity::Force => "f_hat",
        Quantity::Energy => "e_hat",
        Quantity::Entropy => "s_hat",
    };
    let mut t = Table::new(&["l3", "temperature", "z", name, reduced_name, "tail_bound", "method", "field"]);
    t.push(vec![
        p.l3.into(),
        p.temperature.into(),
        r.z.into(),
        value.into(),
        (reduced.value * field_scale).into(),
        (reduced.tail_bound * field_scale).into(),
        reduced.method.as_str().into(),
        match p.field {
            Field::Em => "em",
            Field::Scalar => "scalar",
        }
        .into(),
    ]);
    Ok((t, true))
}

fn scan(
    zmin: f64,
    zmax: f64,
    points: usize,
    spacing: Spacing,
    with_expansion: Option<usize>,
    common: &Common,
) -> Result<(Table, bool), Failure> {
    if points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    if !(zmin < zmax) || !(zmin >= 0.0) || !zmax.is_finite() {
        return Err(usage("need 0 <= zmin < zmax"));
    }
    let zs = match spacing {
        Spacing::Log => {
            if zmin <= 0.0 {
                return Err(usage("log spacing needs zmin > 0"));
            }
            selftest::log_grid(zmin, zmax, points)
        }
        Spacing::Linear => selftest::linear_grid(zmin, zmax, points),
    };
    let tol = common.tolerance;
    let rows: Vec<_> = zs
        .par_iter()
        .map(|&z| -> casimir_core::Result<_> {
            let r = lattice::reduced_thermo(z, tol)?;
            let e = match with_expansion {
                Some(order) if z > 0.0 => {
                    Some(expansion::a_hat_expansion(z, order, expansion::regime_for(z))?)
                }
                Some(order) => Some(expansion::a_hat_expansion(z, order, Regime::LowT)?),
                None => None,
            };
            Ok((r, e))
        })
        .collect::<casimir_core::Result<_>>()?;
    let mut headers = vec!["z", "a_hat", "f_hat", "e_hat", "s_hat", "method", "tail_bound"];
    if with_expansion.is_some() {
        headers.extend(["a_hat_expansion", "expansion_regime", "expansion_rel_error"]);
    }
    let mut t = Table::new(&headers);
    for (r, e) in rows {
        let mut row: Vec<Cell> = vec![
            r.z.into(),
            r.a_hat.value.into(),
            r.f_hat.value.into(),
            r.e_hat.value.into(),
            r.s_hat.value.into(),
            r.a_hat.method.as_str().into(),
            r.a_hat.tail_bound.into(),
        ];
        if let Some(e) = e {
            row.push(e.value.into());
            row.push(regime_name(e.regime).into());
            row.push(((e.value - r.a_hat.value) / r.a_hat.value).abs().into());
        }
        t.push(row);
    }
    Ok((t, true))
}

fn regime_name(r: Regime) -> &'static str {
    match r {
        Regime::HighT => "highT",
        Regime::LowT => "lowT",
    }
}

fn expansions(z: f64, order: usize, common: &Common) -> Result<(Table, bool), Failure> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(usage("--z must be positive"));
    }
    let exact = lattice::a_hat_lattice(z, common.tolerance)?;
    let mut t = Table::new(&[
        "z",
        "regime",
        "order",
        "a_hat_expansion",
        "estimated_error",
        "a_hat_lattice",
        "rel_error",
        "canonical",
    ]);
    for regime in [Regime::HighT, Regime::LowT] {
        let e = expansion::a_hat_expansion(z, order, regime)?;
        t.push(vec![
            z.into(),
            regime_name(regime).into(),
            order.into(),
            e.value.into(),
            e.estimated_error.into(),
            exact.value.into(),
            ((e.value - exact.value) / exact.value).abs().into(),
            (expansion::regime_for(z) == regime).into(),
        ]);
    }
    Ok((t, true))
}

fn oracle_check(zs: &[f64], threshold: f64, common: &Common) -> Result<(Table, bool), Failure> {
    let default = [0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0];
    let zs = if zs.is_empty() { &default[..] } else { zs };
    if zs.iter().any(|z| !(*z > 0.0) || !z.is_finite()) {
        return Err(usage("every --z must be positive"));
    }
    let rows = selftest::oracle_matrix(zs, common.tolerance, threshold)?;
    let mut t = Table::new(&[
        "z",
        "a_lattice",
        "a_expansion",
        "f_lattice",
        "f_matsubara",
        "rel_dev_expansion",
        "rel_dev_matsubara",
        "passed",
    ]);
    let mut ok = true;
    for r in &rows {
        ok &= r.passed;
        t.push(vec![
            r.z.into(),
            r.a_lattice.into(),
            r.a_expansion.into(),
            r.f_lattice.into(),
            r.f_matsubara.into(),
            r.rel_dev_expansion.into(),
            r.rel_dev_matsubara.into(),
            r.passed.into(),
        ]);
    }
    let max_e = rows.iter().map(|r| r.rel_dev_expansion).fold(0.0, f64::max);
    let max_m = rows.iter().map(|r| r.rel_dev_matsubara).fold(0.0, f64::max);
    t.push(vec![
        Cell::Text("max".into()),
        Cell::Text(String::new()),
        Cell::Text(String::new()),
        Cell::Text(String::new()),
        Cell::Text(String::new()),
        max_e.into(),
        max_m.into(),
        ok.into(),
    ]);
    Ok((t, ok))
}

fn classical_box(length: f64, l3: f64, n_max: u64, quad_tolerance: f64) -> Result<(Table, bool), Failure> {
    let p = BoxPartition::new(length, l3, 1.0).map_err(|e| usage(e.to_string()))?;
    let closed = classical_shift_closed(&p);
    let quad = classical_shift_quadrature(&p, n_max, quad_tolerance)?;
    let ratio = em_high_t_consistency(l3, length).ok();
    let mut t = Table::new(&["length", "l3", "closed", "quadrature", "quadrature_bound", "em_ratio"]);
    t.push(vec![
        length.into(),
        l3.into(),
        closed.into(),
        quad.value.into(),
        quad.tail_bound.into(),
        ratio.map(Cell::Num).unwrap_or_else(|| Cell::Text(String::new())),
    ]);
    Ok((t, true))
}

fn orbit_table(
    kind: Kind,
    l3: f64,
    lt: Option<f64>,
    l1: Option<f64>,
    l2: Option<f64>,
    max_length: f64,
) -> Result<(Table, bool), Failure> {
    let (okind, records) = match kind {
        Kind::Interval => (OrbitKind::Interval, orbits::interval_orbits(l3, max_length)),
        Kind::Cylinder => {
            let lt = lt.ok_or_else(|| usage("--lt is required for cylinder orbits"))?;
            (OrbitKind::Cylinder, orbits::cylinder_orbits(l3, lt, max_length))
        }
        Kind::Box => {
            let l1 = l1.ok_or_else(|| usage("--l1 is required for box orbits"))?;
            let l2 = l2.ok_or_else(|| usage("--l2 is required for box orbits"))?;
            (OrbitKind::Box, orbits::box_orbits(l1, l2, l3, max_length))
        }
    };
    let records = records.map_err(|e| usage(e.to_string()))?;
    let mut headers: Vec<&str> = okind.winding_names().to_vec();
    headers.extend(["length", "multiplicity"]);
    let mut t = Table::new(&headers);
    for r in records {
        let mut row: Vec<Cell> = r.windings.iter().map(|&n| Cell::Int(n)).collect();
        row.push(r.length.into());
        row.push(Cell::Int(r.multiplicity as i64));
        t.push(row);
    }
    Ok((t, true))
}

fn run_selftest(common: &Common) -> Result<(Table, bool), Failure> {
    let checks = selftest::run_selftest(common.tolerance)?;
    let mut t = Table::new(&["check", "deviation", "threshold", "passed"]);
    let mut ok = true;
    for c in checks {
        ok &= c.passed;
        t.push(vec![c.name.into(), c.deviation.into(), c.threshold.into(), c.passed.into()]);
    }
    Ok((t, ok))
}

fn dispatch(cli: &Cli) -> Result<(Table, bool), Failure> {
    let c = &cli.common;
    if !(c.tolerance > 0.0) {
        return Err(usage("--tolerance must be positive"));
    }
    match &cli.command {
        Command::FreeEnergy(p) => point(Quantity::FreeEnergy, p, c),
        Command::Force(p) => point(Quantity::Force, p, c),
        Command::Energy(p) => point(Quantity::Energy, p, c),
        Command::Entropy(p) => point(Quantity::Entropy, p, c),
        Command::Scan {
            zmin,
            zmax,
            points,
            spacing,
            with_expansion,
        } => scan(*zmin, *zmax, *points, *spacing, *with_expansion, c),
        Command::Expansions { z, order } => expansions(*z, *order, c),
        Command::OracleCheck { z, threshold } => oracle_check(z, *threshold, c),
        Command::ClassicalBox {
            length,
            l3,
            n_max,
            quad_tolerance,
        } => classical_box(*length, *l3, *n_max, *quad_tolerance),
        Command::Orbits {
            kind,
            l3,
            lt,
            l1,
            l2,
            max_length,
        } => orbit_table(*kind, *l3, *lt, *l1, *l2, *max_length),
        Command::Selftest => run_selftest(c),
    }
}

fn emit(table: &Table, common: &Common) -> anyhow::Result<()> {
    match &common.out {
        Some(path) => {
            let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
            let mut w = BufWriter::new(f);
            table.write(common.format, &mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            table.write(common.format, &mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
            || c.downcast_ref::<csv::Error>()
                .is_some_and(|c| matches!(c.kind(), csv::ErrorKind::Io(io) if io.kind() == io::ErrorKind::BrokenPipe))
            || c.downcast_ref::<serde_json::Error>().and_then(|j| j.io_error_kind()) == Some(io::ErrorKind::BrokenPipe)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok((table, ok)) => match emit(&table, &cli.common) {
            Ok(()) if ok => ExitCode::SUCCESS,
            Ok(()) => ExitCode::from(1),
            Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(1)
            }
        },
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
