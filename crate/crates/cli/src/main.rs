mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use jjarray::physical::{critical_current, energy_prefactor, josephson_energy, leg_self_inductance};
use jjarray::{
    builtin_topology, ground_branches, parabola, parse_topology, sweep, ArrayTopology,
    CouplingSystem, EnumerationWindow, FluxGrid, PhysicalParams, VortexConfig, BUILTIN_NAMES,
};

use output::{fmt_num, fmt_sci};

#[derive(Parser)]
#[command(name = "jjarray", version, about = "Energy landscapes of Josephson-junction plaquette arrays")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Energies of every configuration in the window over a flux grid
    Sweep(SweepArgs),
    /// Circulating currents of one configuration
    Currents(PointArgs),
    /// Total energy of one configuration, in units of E_J
    Energy(EnergyArgs),
    /// Exact ground-state branches over a flux range
    Branches(BranchArgs),
    /// Flux at which a configuration's energy is minimal
    Vertex(VertexArgs),
    /// Leg self-inductance of a polygonal plaquette
    Inductance(GeometryArgs),
    /// Inductance, critical current, Josephson energy and kappa
    Params(GeometryArgs),
    /// Names of the built-in topologies
    ListTopologies,
}

#[derive(Args)]
struct TopologyArg {
    /// Built-in topology name or path to a topology document
    #[arg(long)]
    topology: String,
}

#[derive(Args, Clone, Copy)]
struct GeometryArgs {
    /// Leg length D in meters
    #[arg(long, default_value_t = 45e-6)]
    length: f64,
    /// Leg half-width a in meters (the leg is 2a wide)
    #[arg(long, default_value_t = 7.5e-6)]
    half_width: f64,
    /// Legs per plaquette
    #[arg(long, default_value_t = 3)]
    legs: u32,
    /// Critical current per unit a·D, in A/m²
    #[arg(long, default_value_t = 1500.0)]
    jc_scale: f64,
}

impl GeometryArgs {
    fn params(&self) -> PhysicalParams {
        PhysicalParams::new(self.length, self.half_width, self.legs).with_jc_scale(self.jc_scale)
    }
}

#[derive(Args)]
struct KappaArgs {
    /// Energy prefactor in (0, 1]; defaults to 1
    #[arg(long, conflicts_with = "physical")]
    kappa: Option<f64>,
    /// Derive the prefactor from the plaquette geometry
    #[arg(long)]
    physical: bool,
    #[command(flatten)]
    geometry: GeometryArgs,
}

impl KappaArgs {
    fn resolve(&self) -> Result<f64, CliError> {
        let kappa = if self.physical {
            self.geometry.params().kappa()?
        } else {
            self.kappa.unwrap_or(1.0)
        };
        if !(kappa > 0.0 && kappa <= 1.0) {
            return Err(CliError::Validation(format!("kappa must lie in (0, 1], got {kappa}")));
        }
        Ok(kappa)
    }
}

#[derive(Args)]
struct WindowArgs {
    #[arg(long, default_value_t = -1, allow_negative_numbers = true)]
    n_min: i64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    n_max: i64,
}

impl WindowArgs {
    fn window(&self) -> Result<EnumerationWindow, CliError> {
        Ok(EnumerationWindow::new(self.n_min, self.n_max)?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SweepFormat {
    Csv,
    Json,
    PlotData,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    topology: TopologyArg,
    #[arg(long, allow_negative_numbers = true)]
    f_min: f64,
    #[arg(long, allow_negative_numbers = true)]
    f_max: f64,
    #[arg(long, default_value_t = 0.005)]
    f_step: f64,
    #[command(flatten)]
    window: WindowArgs,
    #[command(flatten)]
    kappa: KappaArgs,
    #[arg(long, value_enum, default_value = "csv")]
    format: SweepFormat,
    /// Write here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    topology: TopologyArg,
    /// Comma-separated fluxoid numbers, one per plaquette
    #[arg(long, allow_hyphen_values = true)]
    n: String,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    f: f64,
}

#[derive(Args)]
struct EnergyArgs {
    #[command(flatten)]
    point: PointArgs,
    #[command(flatten)]
    kappa: KappaArgs,
}

#[derive(Args)]
struct BranchArgs {
    #[command(flatten)]
    topology: TopologyArg,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    f_min: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    f_max: f64,
    #[command(flatten)]
    window: WindowArgs,
    #[command(flatten)]
    kappa: KappaArgs,
    #[arg(long, value_enum, default_value = "csv")]
    format: ReportFormat,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VertexArgs {
    #[command(flatten)]
    topology: TopologyArg,
    #[arg(long, allow_hyphen_values = true)]
    n: String,
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Io(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Io(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn render(&self) -> String {
        let (tag, msg) = match self {
            CliError::Validation(m) => ("validation", m),
            CliError::Io(m) => ("io", m),
            CliError::Numerical(m) => ("numerical", m),
        };
        format!("error[{tag}]: {}", msg.replace('\n', " "))
    }
}

impl From<jjarray::Error> for CliError {
    fn from(e: jjarray::Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

fn load_topology(source: &str) -> Result<ArrayTopology, CliError> {
    if BUILTIN_NAMES.contains(&source) {
        return Ok(builtin_topology(source)?);
    }
    let path = Path::new(source);
    if !path.exists() && path.extension().is_none() && path.components().count() == 1 {
        return Err(CliError::Validation(format!(
            "unknown topology `{source}` (built-ins: {})",
            BUILTIN_NAMES.join(", ")
        )));
    }
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_topology(&text)?)
}

fn parse_config(text: &str, expected: usize) -> Result<VortexConfig, CliError> {
    let values = text
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Validation(format!("bad fluxoid number `{s}`")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if values.len() != expected {
        return Err(CliError::Validation(format!(
            "--n has {} entries but the topology has {expected} plaquettes",
            values.len()
        )));
    }
    Ok(VortexConfig::new(values))
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), CliError> {
    match output {
        Some(p) => {
            fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep(args) => {
            if !(args.f_min < args.f_max) {
                return Err(CliError::Validation(format!(
                    "empty flux grid: f-min {} must be below f-max {}",
                    args.f_min, args.f_max
                )));
            }
            let kappa = args.kappa.resolve()?;
            let window = args.window.window()?;
            let topo = load_topology(&args.topology.topology)?;
            let system = CouplingSystem::assemble(&topo)?;
            let grid = FluxGrid::new(args.f_min, args.f_max, args.f_step)?;
            let table = sweep(&system, window, grid, kappa)?;
            let text = match args.format {
                SweepFormat::Csv => output::sweep_csv(&table),
                SweepFormat::Json => output::sweep_json(&table, topo.name(), kappa),
                SweepFormat::PlotData => output::sweep_plot_data(&table),
            };
            emit(&text, args.output.as_deref())
        }
        Command::Currents(args) => {
            let topo = load_topology(&args.topology.topology)?;
            let system = CouplingSystem::assemble(&topo)?;
            let n = parse_config(&args.n, topo.len())?;
            let currents = system.solve_currents(&n, args.f)?;
            let line: Vec<String> = currents.as_slice().iter().map(|&x| fmt_num(x)).collect();
            println!("{}", line.join(", "));
            Ok(())
        }
        Command::Energy(args) => {
            let kappa = args.kappa.resolve()?;
            let topo = load_topology(&args.point.topology.topology)?;
            let system = CouplingSystem::assemble(&topo)?;
            let n = parse_config(&args.point.n, topo.len())?;
            println!("{}", fmt_num(system.energy(&n, args.point.f, kappa)?));
            Ok(())
        }
        Command::Branches(args) => {
            if !(args.f_min < args.f_max) {
                return Err(CliError::Validation(format!(
                    "empty flux range: f-min {} must be below f-max {}",
                    args.f_min, args.f_max
                )));
            }
            let kappa = args.kappa.resolve()?;
            let window = args.window.window()?;
            let topo = load_topology(&args.topology.topology)?;
            let system = CouplingSystem::assemble(&topo)?;
            let branches = ground_branches(&system, window, (args.f_min, args.f_max), kappa)?;
            let text = match args.format {
                ReportFormat::Csv => output::branches_csv(&branches),
                ReportFormat::Json => output::branches_json(&branches, topo.name(), kappa),
            };
            emit(&text, args.output.as_deref())
        }
        Command::Vertex(args) => {
            let topo = load_topology(&args.topology.topology)?;
            let system = CouplingSystem::assemble(&topo)?;
            let n = parse_config(&args.n, topo.len())?;
            println!("{}", fmt_num(parabola(&system, &n, 1.0)?.vertex_f));
            Ok(())
        }
        Command::Inductance(geom) => {
            let l = leg_self_inductance(&geom.params())?;
            println!("inductance_H={}", fmt_sci(l));
            Ok(())
        }
        Command::Params(geom) => {
            let p = geom.params();
            let l = leg_self_inductance(&p)?;
            let ic = critical_current(&p);
            let ej = josephson_energy(ic)?;
            let kappa = energy_prefactor(l, ic)?;
            println!("inductance_H={}", fmt_sci(l));
            println!("critical_current_A={}", fmt_sci(ic));
            println!("josephson_energy_J={}", fmt_sci(ej));
            println!("kappa={}", fmt_num(kappa));
            println!("self_energy_fraction={}", fmt_num(1.0 - kappa));
            Ok(())
        }
        Command::ListTopologies => {
            for name in BUILTIN_NAMES {
                println!("{name}");
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let rendered = e.render().to_string();
            let first = rendered
                .lines()
                .next()
                .unwrap_or("invalid arguments")
                .trim_start_matches("error: ")
                .to_string();
            let err = CliError::Validation(first);
            eprintln!("{}", err.render());
            return ExitCode::from(err.code());
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.render());
            ExitCode::from(e.code())
        }
    }
}
