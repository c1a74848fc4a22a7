use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use fillrate::analytic::{predict, solve, ModelKind, ModelPrediction};
use fillrate::config::RunConfig;
use fillrate::sim::{self, DeliveryTiming, TraceWriter};
use fillrate::validation::grid::{
    assemble_table, flag_flips, model_column, simulate_cells, GridOptions, OpeningStock, TableId,
    TableParameters, MAX_FLAG_FLIPS,
};
use fillrate::validation::table::{emit_table, RunManifest, TableFormat};
use fillrate::validation::{run_replications, ReplicationStats};
use fillrate::UnfulfilledDemandMode;

#[derive(Parser)]
#[command(name = "fillrate", version, about = "Fill-rate models and simulation for reorder-point inventory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Predict the fill rate at the configured reorder point.
    Predict(CommonArgs),
    /// Find the safety factor and reorder point for `beta_target`.
    Solve(CommonArgs),
    /// Run replications of the day-stepped simulator.
    Simulate(CommonArgs),
    /// Regenerate a validation table (or all four).
    Validate(CommonArgs),
}

#[derive(Args, Clone, Debug)]
struct CommonArgs {
    /// Key = value configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Extra `key=value` assignments applied after the file.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long)]
    model: Option<ModelKind>,
    #[arg(long)]
    mode: Option<UnfulfilledDemandMode>,
    /// Validation table id, or `all`.
    #[arg(long)]
    table: Option<String>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    format: Option<TableFormat>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    exact_cdf: bool,
    #[arg(long)]
    truncate_negative_demand: bool,
    /// Per-day CSV trace of the first replication.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Open with `rop` units instead of `rop + roq`.
    #[arg(long)]
    open_at_rop: bool,
    #[arg(long)]
    deliveries_after_demand: bool,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

impl CommonArgs {
    fn load(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_path(path)?,
            None => RunConfig::default(),
        };
        for assignment in &self.set {
            let (k, v) = assignment
                .split_once('=')
                .with_context(|| format!("--set expects KEY=VALUE, got `{assignment}`"))?;
            cfg.set(k.trim(), v.trim())?;
        }
        if let Some(m) = self.model {
            cfg.model = m;
        }
        if let Some(m) = self.mode {
            cfg.mode = m;
        }
        if let Some(n) = self.reps {
            cfg.replications = n;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(f) = self.format {
            cfg.format = f;
        }
        if let Some(o) = &self.out {
            cfg.out = Some(o.clone());
        }
        cfg.exact_cdf |= self.exact_cdf;
        cfg.truncate_negative_demand |= self.truncate_negative_demand;
        cfg.check()?;
        Ok(cfg)
    }
}

fn pct(x: f64) -> String {
    format!("{:.1}%", 100.0 * x)
}

#[derive(Serialize)]
struct PredictReport<'a> {
    model: ModelKind,
    mode: UnfulfilledDemandMode,
    #[serde(flatten)]
    prediction: &'a ModelPrediction,
}

fn cmd_predict(args: &CommonArgs) -> Result<ExitCode> {
    let cfg = args.load()?;
    let p = predict(cfg.model, &cfg.model_inputs()?, cfg.rop)?;
    if args.json {
        let report = PredictReport {
            model: cfg.model,
            mode: cfg.mode,
            prediction: &p,
        };
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("model              {}", cfg.model);
        println!("mode               {}", cfg.mode);
        println!("rop                {}", cfg.rop);
        println!("lambda             {:.6}", p.lambda);
        println!("expected_shortage  {:.4}", p.expected_shortage);
        if let Some(eu) = p.expected_undershoot {
            println!("expected_undershoot {:.4}", eu);
        }
        println!("beta               {:.6} ({})", p.beta, pct(p.beta));
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(args: &CommonArgs) -> Result<ExitCode> {
    let cfg = args.load()?;
    let target = cfg.require_beta_target()?;
    let p = solve(cfg.model, &cfg.model_inputs()?, target)?;
    if args.json {
        let report = PredictReport {
            model: cfg.model,
            mode: cfg.mode,
            prediction: &p,
        };
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("model              {}", cfg.model);
        println!("mode               {}", cfg.mode);
        println!("beta_target        {}", target);
        println!("lambda             {:.6}", p.lambda);
        println!("safety_stock       {:.4}", p.safety_stock);
        println!("cycle_stock        {:.4}", p.cycle_stock);
        println!("rop                {:.4}", p.rop);
        println!("beta               {:.9}", p.beta);
    }
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SimulateReport<'a> {
    mode: UnfulfilledDemandMode,
    rop: f64,
    roq: f64,
    replications: usize,
    seed: u64,
    mean_beta: f64,
    std_beta: Option<f64>,
    per_replication_betas: &'a [f64],
}

fn write_trace(cfg: &sim::SimConfig, path: &Path) -> Result<()> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut writer = TraceWriter::new(BufWriter::new(file));
    let mut rng = sim::rng::replication_rng(cfg.seed, 0);
    let mut failed = None;
    sim::run_with(cfg, &mut rng, 0, |_, rec| {
        if failed.is_none() {
            if let Err(e) = writer.write(rec) {
                failed = Some(e);
            }
        }
    })?;
    if let Some(e) = failed {
        return Err(e).with_context(|| format!("writing {}", path.display()));
    }
    writer.finish().with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn cmd_simulate(args: &CommonArgs) -> Result<ExitCode> {
    let cfg = args.load()?;
    let mut sim_cfg = cfg.sim_config()?;
    if args.open_at_rop {
        sim_cfg.initial_on_hand = sim_cfg.rop;
    }
    if args.deliveries_after_demand {
        sim_cfg.delivery_timing = DeliveryTiming::AfterDemand;
    }
    let stats: ReplicationStats = run_replications(&sim_cfg, cfg.replications, cfg.seed)?;
    if let Some(path) = &args.trace {
        write_trace(&sim_cfg, path)?;
    }
    if let Some(path) = &cfg.out {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
        w.write_record(["replication", "beta"])?;
        for (i, b) in stats.per_replication_betas.iter().enumerate() {
            w.write_record([i.to_string(), b.to_string()])?;
        }
        w.flush()?;
    }
    if args.json {
        let report = SimulateReport {
            mode: cfg.mode,
            rop: sim_cfg.rop,
            roq: sim_cfg.roq,
            replications: stats.n,
            seed: cfg.seed,
            mean_beta: stats.mean_beta,
            std_beta: stats.std_beta,
            per_replication_betas: &stats.per_replication_betas,
        };
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("mode          {}", cfg.mode);
        println!("rop           {}", sim_cfg.rop);
        println!("roq           {}", sim_cfg.roq);
        println!("replications  {}", stats.n);
        println!("seed          {}", cfg.seed);
        println!("mean_beta     {:.6} ({})", stats.mean_beta, pct(stats.mean_beta));
        match stats.std_beta {
            Some(s) => println!("std_beta      {:.6} ({})", s, pct(s)),
            None => println!("std_beta      undefined (fewer than 2 replications)"),
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn table_ids(arg: Option<&str>) -> Result<Vec<TableId>> {
    match arg {
        None | Some("all") => Ok(TableId::ALL.to_vec()),
        Some(s) => Ok(vec![s.parse::<TableId>().map_err(anyhow::Error::msg)?]),
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn output_path(base: &Path, table: TableId, many: bool) -> PathBuf {
    if !many {
        return base.to_path_buf();
    }
    let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("table");
    let ext = base.extension().and_then(|s| s.to_str()).unwrap_or("txt");
    base.with_file_name(format!("{stem}-{table}.{ext}"))
}

fn cmd_validate(args: &CommonArgs) -> Result<ExitCode> {
    let cfg = args.load()?;
    let tables = table_ids(args.table.as_deref())?;
    let params = TableParameters {
        mean_demand: cfg.mean_demand,
        lead_time_min: cfg.lead_time_min,
        lead_time_max: cfg.lead_time_max,
        rop: cfg.rop,
        review_period: cfg.review_period,
        horizon_days: cfg.horizon_days,
        opening_stock: if args.open_at_rop { OpeningStock::Rop } else { OpeningStock::RopPlusRoq },
        delivery_timing: if args.deliveries_after_demand {
            DeliveryTiming::AfterDemand
        } else {
            DeliveryTiming::BeforeDemand
        },
        truncate_negative_demand: cfg.truncate_negative_demand,
    };
    let opts = GridOptions {
        params,
        replications: cfg.replications,
        master_seed: cfg.seed,
        cdf: cfg.cdf(),
    };

    let mut backorder = None;
    let mut lost_sales = None;
    let mut all_ok = true;
    let many = tables.len() > 1;
    for table_id in tables {
        let slot = match table_id.mode() {
            UnfulfilledDemandMode::Backorder => &mut backorder,
            UnfulfilledDemandMode::LostSales => &mut lost_sales,
        };
        if slot.is_none() {
            *slot = Some(simulate_cells(table_id.mode(), &opts)?);
        }
        let sims = slot.as_ref().expect("filled above");
        let model = model_column(table_id, &opts.params, opts.cdf)?;
        let table = assemble_table(table_id, &model, sims);
        let text = emit_table(&table, cfg.format);
        let manifest = RunManifest::new(&table, &opts).to_json();

        match &cfg.out {
            Some(base) => {
                let path = output_path(base, table_id, many);
                write_output(Some(&path), &text)?;
                let mut manifest_path = path.clone().into_os_string();
                manifest_path.push(".manifest.json");
                write_output(Some(Path::new(&manifest_path)), &manifest)?;
            }
            None => {
                write_output(None, &text)?;
                println!();
                eprintln!("{manifest}");
            }
        }

        let flips = flag_flips(&table);
        let ok = flips.len() <= MAX_FLAG_FLIPS;
        all_ok &= ok;
        eprintln!(
            "{table_id}: {} flag flip(s) versus reference {:?} -> {}",
            flips.len(),
            flips,
            if ok { "ok" } else { "MISMATCH" }
        );
    }
    Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn run() -> Result<ExitCode> {
    let cli = Cli::parse();
    match &cli.command {
        Command::Predict(a) => cmd_predict(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Validate(a) => {
            if a.reps.is_some_and(|n| n < 2) {
                bail!("validate needs --reps of at least 2");
            }
            cmd_validate(a)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
