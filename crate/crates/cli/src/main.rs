use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use convexgeo_core::bases::{d_basis, has_d_cycles, k_basis, render_cycle, sigma_foe};
use convexgeo_core::canonical::{canonical_basis, critical_sets, optimum_parameters};
use convexgeo_core::generators::{
    affine_2d, cq_check, order_convex_basis, parse_meets, parse_points, subsemilattice_basis,
    suborder_basis,
};
use convexgeo_core::optimize::{
    brute_force_optimum, carousel_check, optimize_auto, optimize_carousel, optimize_d_geometry,
    optimize_order_convex, OptimizationOutcome,
};
use convexgeo_core::parse::{parse_basis, parse_set_literal};
use convexgeo_core::poset::parse_poset;
use convexgeo_core::{bases_equivalent, ClosureSystem, ElementTable, Error, Implication, DEFAULT_CAP};

#[derive(Parser)]
#[command(name = "convexgeo", version, about = "Implicational bases of finite convex geometries")]
struct Cli {
    /// Ground-set cap for exponential enumerations
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Property {
    ConvexGeometry,
    Standard,
    DCycles,
    Carousel,
    Cq,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Strategy {
    Auto,
    Carousel,
    DGeometry,
    OrderConvex,
    Brute,
}

#[derive(Subcommand)]
enum Command {
    /// Close a set under the implications of a basis file
    Closure {
        /// Comma- or space-separated element names
        #[arg(long)]
        set: String,
        file: PathBuf,
    },
    /// Enumerate all closed sets
    ClosedSets { file: PathBuf },
    /// Check the convex-geometry axioms, or one named property
    Verify {
        #[arg(long)]
        property: Option<Property>,
        /// Carousel parameter (with --property carousel)
        #[arg(long)]
        n: Option<usize>,
        file: PathBuf,
    },
    /// The canonical (Duquenne-Guigues) basis
    Canonical { file: PathBuf },
    /// Canonical basis plus critical sets and the optimum parameters
    Analyze { file: PathBuf },
    /// The K-basis
    Kbasis { file: PathBuf },
    /// The D-basis and its D-relation
    Dbasis { file: PathBuf },
    /// The Sigma_FOE basis of a D-geometry
    Foe { file: PathBuf },
    /// Construct an optimum basis
    Optimize {
        #[arg(long, value_enum, default_value_t = Strategy::Auto)]
        strategy: Strategy,
        /// Basis file (all strategies except order-convex)
        file: Option<PathBuf>,
        /// Poset file (strategy order-convex)
        #[arg(long)]
        poset: Option<PathBuf>,
    },
    /// Test whether two basis files define the same closure system
    Equiv { first: PathBuf, second: PathBuf },
    /// Size metrics of a basis file
    Stats { file: PathBuf },
    /// Generate the canonical basis of a constructed geometry
    Generate {
        /// Planar points file (`name x y`, exact rationals)
        #[arg(long)]
        points: Option<PathBuf>,
        /// Poset file (`a < b` lines); order-convex by default
        #[arg(long)]
        poset: Option<PathBuf>,
        /// With --poset: build the suborder geometry instead of Co(P)
        #[arg(long)]
        suborder: bool,
        /// Meet-table file (`a ^ b = c` lines)
        #[arg(long)]
        meets: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            let code = match err {
                Error::Input(_) => 1,
                Error::Domain(_) | Error::Internal(_) => 2,
                Error::CapExceeded { .. } => 3,
            };
            ExitCode::from(code)
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))
}

fn load_system(path: &Path, cap: usize) -> Result<ClosureSystem, Error> {
    let (mut sys, warnings) = parse_basis(&read(path)?)?;
    for w in warnings {
        eprintln!("warning: {}: {w}", path.display());
    }
    sys.set_cap(cap);
    Ok(sys)
}

fn run(cli: Cli) -> Result<(), Error> {
    let cap = cli.cap;
    match cli.command {
        Command::Closure { set, file } => {
            let sys = load_system(&file, cap)?;
            let seed = parse_set_literal(&sys, &set)?;
            println!("{}", sys.table().render_set(&sys.closure(&seed)));
        }
        Command::ClosedSets { file } => {
            let sys = load_system(&file, cap)?;
            for z in &sys.closed_sets()?.sets {
                println!("{}", sys.table().render_set_braced(z));
            }
        }
        Command::Verify { property, n, file } => {
            let sys = load_system(&file, cap)?;
            run_verify(&sys, property, n)?;
        }
        Command::Canonical { file } => {
            let sys = load_system(&file, cap)?;
            print!("{}", canonical_basis(&sys)?.to_text());
        }
        Command::Analyze { file } => {
            let sys = load_system(&file, cap)?;
            let report = canonical_basis(&sys)?;
            let records = critical_sets(&sys)?;
            let params = optimum_parameters(&sys)?;
            print!("{}", report.to_text());
            for (rec, param) in records.iter().zip(&params) {
                let b = param.b.map_or(String::new(), |b| format!(" b={b}"));
                println!(
                    "# critical: {} essential={} k={}{b} generators={}",
                    sys.table().render_set_braced(&rec.critical),
                    sys.table().render_set_braced(&rec.essential),
                    rec.k,
                    rec.minimal_generators.len(),
                );
            }
        }
        Command::Kbasis { file } => {
            let sys = load_system(&file, cap)?;
            print!("{}", k_basis(&sys)?.to_text());
        }
        Command::Dbasis { file } => {
            let sys = load_system(&file, cap)?;
            let (report, relation) = d_basis(&sys)?;
            print!("{}", report.to_text());
            let pairs: Vec<String> = relation
                .pairs
                .iter()
                .map(|&(b, a)| format!("{} D {}", sys.table().name(b), sys.table().name(a)))
                .collect();
            println!("# d-relation: {}", pairs.join(", "));
        }
        Command::Foe { file } => {
            let sys = load_system(&file, cap)?;
            print!("{}", sigma_foe(&sys)?.to_text());
        }
        Command::Optimize {
            strategy,
            file,
            poset,
        } => {
            let outcome = run_optimize(strategy, file.as_deref(), poset.as_deref(), cap)?;
            println!("# strategy: {}", outcome.strategy.as_str());
            for note in &outcome.certificate {
                println!("# certificate: {note}");
            }
            print!("{}", outcome.basis.to_text());
        }
        Command::Equiv { first, second } => {
            let a = load_system(&first, cap)?;
            let b = load_system(&second, cap)?;
            let merged = Arc::new(ElementTable::new(
                a.table()
                    .names()
                    .iter()
                    .chain(b.table().names())
                    .cloned()
                    .collect::<Vec<_>>(),
            )?);
            let left = reintern(&a, &merged);
            let right = reintern(&b, &merged);
            println!("equivalent: {}", bases_equivalent(&left, &right));
        }
        Command::Stats { file } => {
            let sys = load_system(&file, cap)?;
            println!("{}", sys.input_report().stats_line());
        }
        Command::Generate {
            points,
            poset,
            suborder,
            meets,
        } => {
            let mut sys = match (&points, &poset, &meets) {
                (Some(p), None, None) => affine_2d(&parse_points(&read(p)?)?)?,
                (None, Some(p), None) => {
                    let poset = parse_poset(&read(p)?)?;
                    if suborder {
                        suborder_basis(&poset)?
                    } else {
                        order_convex_basis(&poset)
                    }
                }
                (None, None, Some(m)) => subsemilattice_basis(&parse_meets(&read(m)?)?),
                _ => {
                    return Err(Error::Input(
                        "generate takes exactly one of --points, --poset, --meets".into(),
                    ))
                }
            };
            sys.set_cap(cap);
            print!("{}", canonical_basis(&sys)?.to_text());
        }
    }
    Ok(())
}

fn run_verify(sys: &ClosureSystem, property: Option<Property>, n: Option<usize>) -> Result<(), Error> {
    match property {
        None => {
            let report = sys.verify_axioms()?;
            println!("zero_closed: {}", report.zero_closed);
            println!("standard: {}", report.standard);
            println!("anti_exchange: {}", report.anti_exchange);
            println!("convex_geometry: {}", report.is_convex_geometry);
            print_anti_exchange_witness(sys, &report.anti_exchange_witness);
        }
        Some(Property::ConvexGeometry) => {
            let report = sys.verify_axioms()?;
            println!("convex-geometry: {}", report.is_convex_geometry);
            print_anti_exchange_witness(sys, &report.anti_exchange_witness);
        }
        Some(Property::Standard) => println!("standard: {}", sys.is_standard()),
        Some(Property::DCycles) => {
            let report = has_d_cycles(sys)?;
            match &report.witness {
                Some(cycle) => println!("d-cycles: {}", render_cycle(sys.table(), cycle)),
                None => println!("d-cycles: none"),
            }
        }
        Some(Property::Carousel) => {
            let n = n.ok_or_else(|| {
                Error::Input("--property carousel needs --n <positive integer>".into())
            })?;
            let report = carousel_check(sys, n)?;
            println!("carousel(n={n}): {}", report.holds);
            if let Some((x_set, x, y)) = &report.witness {
                println!(
                    "witness: X={} x={} y={}",
                    sys.table().render_set_braced(x_set),
                    sys.table().name(*x),
                    sys.table().name(*y)
                );
            }
        }
        Some(Property::Cq) => {
            let report = cq_check(sys.implications(), sys.table());
            println!("cq: {}", report.is_cq);
            for comp in &report.nontrivial_components {
                println!("component: {}", sys.table().render_set_braced(comp));
            }
            if let Some((imp, comp)) = &report.witness {
                println!(
                    "witness: implication `{}` has two premise elements in {}",
                    imp.render(sys.table()),
                    sys.table().render_set_braced(comp)
                );
            }
        }
    }
    Ok(())
}

fn print_anti_exchange_witness(
    sys: &ClosureSystem,
    witness: &Option<(convexgeo_core::ElementSet, usize, usize)>,
) {
    if let Some((x_set, x, y)) = witness {
        println!(
            "anti_exchange_witness: X={} x={} y={}",
            sys.table().render_set_braced(x_set),
            sys.table().name(*x),
            sys.table().name(*y)
        );
    }
}

fn run_optimize(
    strategy: Strategy,
    file: Option<&Path>,
    poset: Option<&Path>,
    cap: usize,
) -> Result<OptimizationOutcome, Error> {
    if strategy == Strategy::OrderConvex {
        let path = poset.ok_or_else(|| {
            Error::Input("--strategy order-convex needs --poset <file>".into())
        })?;
        return optimize_order_convex(&parse_poset(&read(path)?)?);
    }
    let path = file.ok_or_else(|| Error::Input("optimize needs a basis file".into()))?;
    let sys = load_system(path, cap)?;
    match strategy {
        Strategy::Auto => optimize_auto(&sys),
        Strategy::Carousel => optimize_carousel(&sys),
        Strategy::DGeometry => optimize_d_geometry(&sys),
        Strategy::Brute => brute_force_optimum(&sys),
        Strategy::OrderConvex => unreachable!("handled above"),
    }
}

fn reintern(sys: &ClosureSystem, merged: &Arc<ElementTable>) -> Vec<Implication> {
    sys.implications()
        .iter()
        .map(|imp| {
            let premise = merged
                .set_from_names(imp.premise.iter().map(|i| sys.table().name(i)))
                .expect("merged table covers both systems");
            let conclusion = merged
                .set_from_names(imp.conclusion.iter().map(|i| sys.table().name(i)))
                .expect("merged table covers both systems");
            Implication::new(premise, conclusion)
        })
        .collect()
}
