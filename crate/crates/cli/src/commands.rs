use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use detach::bench::{run_bench, write_csv, BenchConfig};
use detach::io::{create, open, read_circles, read_distribution, read_weights, write_circles, write_weights};
use detach::optimizer::{CapacityPolicy, CompareConfig, ExhaustiveConfig, MinCutConfig, TerminalSelection};
use detach::{
    estimate_epoi, exhaustive_detach, exact_epoi, generate_instance, graph_stats, greedy_detach, min_cut_detach,
    sample_weights, BridgeBlockNetwork, CircleCollection, CircleId, EdgeWeights, Error, Evaluator, GeneratorParams,
    InducedNetwork, ProfileConfig, Result, RngSpec, SourceDistribution,
};

use crate::{
    BenchArgs, CapacityArg, Cli, Command, EpoiArgs, GenerateArgs, InstanceArgs, MethodArg, OptimizeArgs, StatsArgs,
    StatsFormat,
};

pub(crate) fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Generate(args) => generate(cli, args),
        Command::Stats(args) => stats(cli, args),
        Command::Epoi(args) => epoi(cli, args),
        Command::Optimize(args) => optimize(cli, args),
        Command::Bench(args) => bench(cli, args),
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = std::io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn generate(cli: &Cli, args: &GenerateArgs) -> Result<()> {
    let dir = cli
        .out
        .as_deref()
        .ok_or_else(|| Error::InvalidInput("generate needs --out <directory>".into()))?;
    let params = if args.paper_profile {
        GeneratorParams {
            mix: args.mix,
            weight_a: args.weight_a,
            weight_b: args.weight_b,
            ..GeneratorParams::paper_profile(
                args.n,
                cli.seed,
                ProfileConfig {
                    links_per_bridge: args.links_per_bridge,
                },
            )
        }
    } else {
        GeneratorParams {
            n_vertices: args.n,
            alpha: args.alpha.expect("required by clap"),
            beta: args.beta.expect("required by clap"),
            gamma: args.gamma.expect("required by clap"),
            mix: args.mix,
            weight_a: args.weight_a,
            weight_b: args.weight_b,
            seed: cli.seed,
        }
    };
    // fail on infeasible targets before touching the file system
    params.targets()?;
    let (circles, weights) = generate_instance(&params)?;
    let network = InducedNetwork::induce(&circles, &weights)?;
    let report = graph_stats(&circles, &network);

    fs::create_dir_all(dir)?;
    let mut f = create(&dir.join("circles.json"))?;
    write_circles(&circles, &mut f)?;
    f.flush()?;
    let mut f = create(&dir.join("weights.csv"))?;
    write_weights(&weights, &mut f)?;
    f.flush()?;
    let mut f = create(&dir.join("stats.json"))?;
    serde_json::to_writer_pretty(&mut f, &report)?;
    writeln!(f)?;
    f.flush()?;

    println!(
        "{} vertices, {} circles, {} bridges, {} links, {} edges, {} -> {}",
        report.n_vertices,
        report.n_circles,
        report.n_bridges,
        report.n_links,
        report.n_edges,
        if report.bbn_component_count == 1 { "connected" } else { "disconnected" },
        dir.display()
    );
    Ok(())
}

fn stats(cli: &Cli, args: &StatsArgs) -> Result<()> {
    let circles = read_circles(open(&args.circles)?)?;
    // degrees do not depend on the weights
    let network = InducedNetwork::induce(&circles, &EdgeWeights::flat(&circles, 0.0)?)?;
    let report = graph_stats(&circles, &network);
    let by_extension = cli
        .out
        .as_deref()
        .and_then(Path::extension)
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let format = args
        .format
        .unwrap_or(if by_extension { StatsFormat::Csv } else { StatsFormat::Json });
    match (&cli.out, format) {
        (None, StatsFormat::Json) => print_json(&report),
        (None, StatsFormat::Csv) => report.write_csv(std::io::stdout().lock()),
        (Some(path), format) => {
            let mut f = create(path)?;
            match format {
                StatsFormat::Json => {
                    serde_json::to_writer_pretty(&mut f, &report)?;
                    writeln!(f)?;
                }
                StatsFormat::Csv => report.write_csv(&mut f)?,
            }
            f.flush()?;
            Ok(())
        }
    }
}

struct Instance {
    circles: CircleCollection,
    weights: EdgeWeights,
    p: SourceDistribution,
}

fn load_instance(args: &InstanceArgs, seed: u64) -> Result<Instance> {
    let circles = read_circles(open(&args.circles)?)?;
    let w = &args.weights;
    let mut weights = match &w.weights {
        Some(path) => read_weights(open(path)?)?,
        None => EdgeWeights::new(),
    };
    if let Some(x) = w.flat_weight {
        weights.fill_missing(&circles, x)?;
    } else if let Some((a, b)) = w.beta {
        let edges = InducedNetwork::induce(&circles, &EdgeWeights::flat(&circles, 0.0)?)?;
        for (u, v, x) in sample_weights(&edges, a, b, RngSpec::new(seed, 1))?.iter() {
            if weights.get(u.as_str(), v.as_str()).is_none() {
                weights.insert(u.clone(), v.clone(), x)?;
            }
        }
    } else if w.weights.is_none() {
        return Err(Error::InvalidInput(
            "no weights given: use --weights, --flat-weight or --beta".into(),
        ));
    }
    let p = if args.p == "uniform" {
        SourceDistribution::uniform(&circles)
    } else {
        read_distribution(open(Path::new(&args.p))?)?
    };
    p.validate_for(&circles)?;
    Ok(Instance { circles, weights, p })
}

fn epoi(cli: &Cli, args: &EpoiArgs) -> Result<()> {
    let inst = load_instance(&args.instance, cli.seed)?;
    let estimate = if args.exact {
        exact_epoi(&inst.circles, &inst.weights, &inst.p)?
    } else {
        estimate_epoi(&inst.circles, &inst.weights, &inst.p, args.trials, RngSpec::from_seed(cli.seed))?
    };
    print_json(&estimate)
}

fn terminals(spec: &str) -> Result<TerminalSelection> {
    match spec {
        "largest-influence" | "largest_influence" => Ok(TerminalSelection::LargestInfluence),
        "largest-size" | "largest_size" => Ok(TerminalSelection::LargestSize),
        other => match other.split_once(',') {
            Some((a, b)) => Ok(TerminalSelection::Explicit(CircleId::new(a.trim())?, CircleId::new(b.trim())?)),
            None => Err(Error::InvalidInput(format!(
                "--terminals must be largest-influence, largest-size or `A,B` (got `{other}`)"
            ))),
        },
    }
}

fn optimize(cli: &Cli, args: &OptimizeArgs) -> Result<()> {
    let inst = load_instance(&args.instance, cli.seed)?;
    let rng = RngSpec::from_seed(cli.seed);
    let evaluator = if args.exact {
        Evaluator::exact()
    } else {
        Evaluator::MonteCarlo { trials: args.trials }
    };
    let m = || args.m.ok_or_else(|| Error::InvalidInput("--m is required for this method".into()));
    let result = match args.method {
        MethodArg::Greedy => greedy_detach(&inst.circles, &inst.weights, &inst.p, m()?, evaluator, rng)?,
        MethodArg::Exhaustive => exhaustive_detach(
            &inst.circles,
            &inst.weights,
            &inst.p,
            m()?,
            ExhaustiveConfig {
                combination_cap: args.combination_cap,
                ..Default::default()
            },
        )?,
        MethodArg::Mincut => {
            let config = MinCutConfig {
                terminal_selection: terminals(&args.terminals)?,
                capacity_policy: match args.capacity {
                    CapacityArg::Unit => CapacityPolicy::Unit,
                    CapacityArg::Weighted => CapacityPolicy::Weighted,
                },
                terminal_trials: args.terminal_trials,
            };
            let r = min_cut_detach(&inst.circles, &inst.weights, &inst.p, &config, args.trials, rng)?;
            let (t1, t2) = r.terminals.as_ref().expect("min-cut names its terminals");
            debug_assert!(!BridgeBlockNetwork::build(&r.final_circles).connected(t1, t2));
            r
        }
    };
    if let Some(path) = &cli.out {
        let mut f = create(path)?;
        write_circles(&result.final_circles, &mut f)?;
        f.flush()?;
    }
    print_json(&result)
}

fn bench(cli: &Cli, args: &BenchArgs) -> Result<()> {
    let config = BenchConfig {
        sizes: args.sizes.clone(),
        replicates: args.replicates,
        seed: cli.seed,
        profile: ProfileConfig {
            links_per_bridge: args.links_per_bridge,
        },
        compare: CompareConfig {
            min_cut: MinCutConfig {
                terminal_trials: args.terminal_trials,
                ..Default::default()
            },
            eval_trials: args.trials,
            greedy_trials: args.greedy_trials,
        },
    };
    let (rows, failure) = run_bench(&config);
    match &cli.out {
        Some(path) => {
            let mut f = create(path)?;
            write_csv(&rows, args.record_times, &mut f)?;
            f.flush()?;
        }
        None => write_csv(&rows, args.record_times, std::io::stdout().lock())?,
    }
    match failure {
        None => Ok(()),
        Some(f) => {
            log::error!("row n={} replicate={} seed={} failed: {}", f.n, f.replicate, f.seed, f.error);
            eprintln!("bench stopped at n={} replicate={} (seed {})", f.n, f.replicate, f.seed);
            Err(f.error)
        }
    }
}
