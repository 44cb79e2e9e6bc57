use std::fs;
use std::ops::Range;
use std::path::{Path, PathBuf};

use appraisal_dynamics::experiments::*;
use appraisal_dynamics::io::*;
use appraisal_dynamics::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::*;
use crate::CliError;

type Res<T = ()> = Result<T, CliError>;

const DEFAULT_OUT: &str = "appraisal-out";

fn layered<T>(flags: T, file: Option<&Path>) -> Res<T>
where
    T: Layer + Default + for<'de> Deserialize<'de>,
{
    let from_file = match file {
        Some(p) => load_file(p)?,
        None => T::default(),
    };
    Ok(flags.over(from_file))
}

/// Output directory plus the formats the user asked for.
struct Sink {
    dir: PathBuf,
    formats: Vec<Format>,
}

impl Sink {
    fn new(args: &impl Outputs, heatmap_ok: bool, command: &str) -> Res<Self> {
        let formats = args.formats().map_or_else(|| vec![Format::Csv, Format::Json], <[Format]>::to_vec);
        if !heatmap_ok && formats.contains(&Format::Heatmap) {
            return Err(CliError::Usage(format!("{command} has no heatmap output")));
        }
        let dir = args.out().map_or_else(|| PathBuf::from(DEFAULT_OUT), Path::to_path_buf);
        fs::create_dir_all(&dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
        Ok(Self { dir, formats })
    }

    fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }

    fn write(&self, name: &str, body: &str) -> Res {
        let path = self.dir.join(name);
        fs::write(&path, body).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }

    /// Prints the effective configuration and keeps a copy next to the results.
    fn echo(&self, effective: &Value) -> Res {
        let line = serde_json::to_string(effective).expect("json value serializes");
        println!("effective config: {line}");
        self.write("config.json", &format!("{line}\n"))
    }

    fn json(&self, name: &str, params: &Value, result: &impl Serialize) -> Res {
        if self.wants(Format::Json) {
            self.write(name, &json_summary(params, result)?)?;
        }
        Ok(())
    }

    /// Heatmaps of the recorded states at `frames` (default: first and last).
    fn heatmaps(&self, traj: &Trajectory, frames: Option<&[usize]>) -> Res {
        if !self.wants(Format::Heatmap) {
            return Ok(());
        }
        let default = [0, traj.final_time()];
        let tol = ToleranceConfig::default();
        let spec = HeatmapSpec::default();
        for &t in frames.unwrap_or(&default) {
            let (_, x) = traj.states.iter().find(|(s, _)| *s == t).ok_or_else(|| {
                CliError::Usage(format!("frame {t} was not recorded (last t = {})", traj.final_time()))
            })?;
            emit_heatmap(x, &spec, &tol, &self.dir.join(format!("frame_{t:06}.pgm")))?;
        }
        Ok(())
    }

    fn trajectory(&self, traj: &Trajectory, frames: Option<&[usize]>) -> Res {
        if self.wants(Format::Csv) {
            self.write("summaries.csv", &summaries_csv(&traj.summaries)?)?;
            self.write("final.txt", &matrix_to_text(traj.final_state()))?;
        }
        self.heatmaps(traj, frames)
    }
}

fn sim_config(steps: Option<usize>) -> SimConfig {
    let d = SimConfig::default();
    SimConfig {
        max_steps: steps.unwrap_or(d.max_steps),
        ..d
    }
}

fn read_input(path: &Path) -> Res<AppraisalMatrix> {
    read_matrix(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn trajectory_result(traj: &Trajectory) -> Value {
    let tol = ToleranceConfig::default();
    let last = traj.final_state();
    json!({
        "stop_reason": traj.stop_reason,
        "final_time": traj.final_time(),
        "balance_time": traj.balance_time,
        "outside_domain": traj.outside_domain,
        "final_max_norm": last.max_norm(),
        "final_min_abs": last.min_abs(),
        "final_balanced": is_balanced_multi(last, &tol).balanced,
    })
}

fn print_trajectory(traj: &Trajectory) {
    println!("stop: {:?}", traj.stop_reason);
    println!("final_time: {}", traj.final_time());
    match traj.balance_time {
        Some(t) => println!("balance_time: {t}"),
        None => println!("balance_time: none"),
    }
}

pub fn simulate(flags: SimulateArgs, file: Option<&Path>) -> Res {
    let a = layered(flags, file)?;
    let model = model_kind(a.model, a.epsilon)?;
    let init = existing(a.init.clone(), "init")?;
    let d = SimConfig::default();
    let sim = SimConfig {
        max_steps: a.steps.unwrap_or(d.max_steps),
        convergence_tol: a.convergence_tol.unwrap_or(d.convergence_tol),
        record_every: a.record_every.unwrap_or(d.record_every),
        balance_check: true,
    };
    sim.validate()?;
    let allow_zero_row = a.allow_zero_row.unwrap_or(false);
    let sink = Sink::new(&a, true, "simulate")?;
    let effective = json!({
        "command": "simulate",
        "model": model,
        "init": init,
        "sim": sim,
        "frames": a.frames,
        "allow_zero_row": allow_zero_row,
        "out": sink.dir,
        "format": sink.formats,
    });
    sink.echo(&effective)?;

    let x0 = read_input(&init)?;
    let traj = appraisal_dynamics::simulate(&x0, model, &sim, &ToleranceConfig::default())?;
    sink.trajectory(&traj, a.frames.as_deref())?;
    sink.json("summary.json", &effective, &trajectory_result(&traj))?;
    print_trajectory(&traj);
    match traj.stop_reason {
        StopReason::ZeroRowEncountered { t, row } if !allow_zero_row => Err(CliError::Numerical(format!(
            "row {row} of X({t}) is zero, so X({}) is undefined",
            t + 1
        ))),
        _ => Ok(()),
    }
}

pub fn mc(flags: McArgs, file: Option<&Path>) -> Res {
    let a = layered(flags, file)?;
    let model = model_kind(a.model, a.epsilon)?;
    let init = match a.init.unwrap_or(InitName::NzRow) {
        InitName::NzRow => InitKind::UniformNzRow { a: a.a.unwrap_or(1.0) },
        InitName::RsSymm => InitKind::RsSymm,
        InitName::Interval => InitKind::UniformInterval {
            x_min: a.x_min.unwrap_or(-1.0),
            x_max: a.x_max.unwrap_or(1.0),
        },
    };
    let trials = match a.trials {
        Some(t) => t,
        None => chernoff_sample_size(0.01, 0.01)?,
    };
    let mut cfg = McConfig::new(a.n.unwrap_or(8), model, init, trials, a.seed.unwrap_or(0));
    cfg.horizon_check_start = a.window_start.unwrap_or(cfg.horizon_check_start);
    cfg.horizon_check_end = a.window_end.unwrap_or(cfg.horizon_check_end);
    cfg.floor = a.floor.unwrap_or(cfg.floor);
    cfg.record_trials = a.per_trial.unwrap_or(false);
    cfg.validate()?;
    let sink = Sink::new(&a, false, "mc")?;
    let effective = json!({
        "command": "mc",
        "mc": cfg,
        "out": sink.dir,
        "format": sink.formats,
    });
    sink.echo(&effective)?;

    let r = mc_convergence_probability(&cfg, &ToleranceConfig::default())?;
    if sink.wants(Format::Csv) {
        sink.write("mc.csv", &mc_result_csv(&r)?)?;
        if let Some(records) = &r.per_trial {
            sink.write("trials.csv", &trials_csv(records)?)?;
        }
    }
    let summary = McResult {
        per_trial: None,
        ..r.clone()
    };
    sink.json("mc.json", &effective, &summary)?;
    println!("trials: {}", r.trials);
    println!("successes: {}", r.successes);
    println!("p_hat: {:?}", r.p_hat);
    println!("std_err: {:?}", r.std_err);
    Ok(())
}

fn relation(x: &AppraisalMatrix, a: &Range<usize>, b: &Range<usize>) -> &'static str {
    let tol = ToleranceConfig::default();
    if relation_is(x, a.clone(), b.clone(), 1.0, &tol) {
        "friendly"
    } else if relation_is(x, a.clone(), b.clone(), -1.0, &tol) {
        "hostile"
    } else {
        "mixed"
    }
}

fn relations(x: &AppraisalMatrix, names: &[&str], groups: &[Range<usize>]) -> Value {
    let mut map = serde_json::Map::new();
    for i in 0..groups.len() {
        for j in i + 1..groups.len() {
            let key = format!("{}-{}", names[i], names[j]);
            map.insert(key, json!(relation(x, &groups[i], &groups[j])));
        }
    }
    Value::Object(map)
}

fn print_relations(rel: &Value) {
    if let Value::Object(map) = rel {
        for (k, v) in map {
            println!("{k}: {}", v.as_str().unwrap_or_default());
        }
    }
}

/// Faction partition of the final state, if it is balanced.
fn write_partition(sink: &Sink, x: &AppraisalMatrix) -> Res<Option<Vec<Vec<usize>>>> {
    let report = is_balanced_multi(x, &ToleranceConfig::default());
    let Some(p) = report.factions else { return Ok(None) };
    if sink.wants(Format::Csv) {
        sink.write("partition.csv", &partition_csv(&p)?)?;
    }
    Ok(Some(p.groups()))
}

pub fn perturb(flags: PerturbArgs, file: Option<&Path>) -> Res {
    let a = layered(flags, file)?;
    let (base, groups) = match a.init.clone() {
        Some(path) => {
            let path = existing(Some(path), "init")?;
            (read_input(&path)?, None)
        }
        None => {
            let sizes = a.sizes.clone().unwrap_or_else(|| vec![2, 2, 2, 2]);
            let sizes: [usize; 4] = sizes
                .try_into()
                .map_err(|_| CliError::Usage("--sizes needs four group sizes".into()))?;
            let alphas = a.alphas.clone().unwrap_or_else(|| vec![1.0, 1.0]);
            let alphas: [f64; 2] = alphas
                .try_into()
                .map_err(|_| CliError::Usage("--alphas needs two weights".into()))?;
            let b = two_subgraph_base(sizes, alphas)?;
            (b.x, Some(b.groups))
        }
    };
    let (from, to) = match (&groups, a.from, a.to) {
        (_, Some(f), Some(t)) => (f, t),
        (Some(g), f, t) => (f.unwrap_or(g[0].start), t.unwrap_or(g[2].start)),
        (None, _, _) => return Err(CliError::Usage("--from and --to are required with --init".into())),
    };
    let eta = a.eta.ok_or_else(|| CliError::Usage("missing --eta".into()))?;
    let bilateral = a.bilateral.unwrap_or(false);
    let sim = sim_config(a.steps);
    sim.validate()?;
    let sink = Sink::new(&a, true, "perturb")?;
    let effective = json!({
        "command": "perturb",
        "init": a.init,
        "sizes": groups.as_ref().map(|g| g.iter().map(|r| r.len()).collect::<Vec<_>>()),
        "alphas": a.alphas.clone().unwrap_or_else(|| vec![1.0, 1.0]),
        "from": from,
        "to": to,
        "eta": eta,
        "bilateral": bilateral,
        "sim": sim,
        "frames": a.frames,
        "out": sink.dir,
        "format": sink.formats,
    });
    sink.echo(&effective)?;

    let scenario = PerturbationScenario::SingleLink {
        base,
        from,
        to,
        eta,
        bilateral,
    };
    let traj = scenario.run(&sim, &ToleranceConfig::default())?;
    sink.trajectory(&traj, a.frames.as_deref())?;
    let x = traj.final_state();
    let factions = write_partition(&sink, x)?;
    let rel = groups.as_ref().map(|g| relations(x, &["V1", "V2", "V3", "V4"], g));
    let mut result = trajectory_result(&traj);
    result["factions"] = json!(factions);
    result["relations"] = json!(rel);
    sink.json("summary.json", &effective, &result)?;
    print_trajectory(&traj);
    if let Some(rel) = &rel {
        print_relations(rel);
    }
    Ok(())
}

pub fn ally(flags: AllyArgs, file: Option<&Path>) -> Res {
    let a = layered(flags, file)?;
    let p = AllyParams {
        n1: a.n1.unwrap_or(2),
        n2: a.n2.unwrap_or(2),
        n3: a.n3.unwrap_or(2),
        alpha: a.alpha.unwrap_or(1.0),
        alpha_hat: a.alpha_hat.unwrap_or(1.0),
        eps1: a.eps1.unwrap_or(0.2),
        eps2: a.eps2.unwrap_or(0.1),
    };
    p.validate()?;
    let sim = sim_config(a.steps);
    sim.validate()?;
    let sink = Sink::new(&a, true, "ally")?;
    let effective = json!({
        "command": "ally",
        "params": p,
        "sim": sim,
        "frames": a.frames,
        "out": sink.dir,
        "format": sink.formats,
    });
    sink.echo(&effective)?;

    let traj = PerturbationScenario::AllyCompetition(p).run(&sim, &ToleranceConfig::default())?;
    sink.trajectory(&traj, a.frames.as_deref())?;
    let x = traj.final_state();
    let factions = write_partition(&sink, x)?;
    let rel = relations(x, &["V1", "V2", "V3"], &p.groups());
    let mut result = trajectory_result(&traj);
    result["predictions"] = json!(p.predictions());
    result["factions"] = json!(factions);
    result["relations"] = rel.clone();
    sink.json("summary.json", &effective, &result)?;
    print_trajectory(&traj);
    println!("predictions: {}", serde_json::to_string(&p.predictions()).expect("serializes"));
    print_relations(&rel);
    Ok(())
}

pub fn sweep(flags: SweepArgs, file: Option<&Path>) -> Res {
    let a = layered(flags, file)?;
    let d = SweepGrid::default();
    let grid = SweepGrid {
        n_values: a.n_values.clone().unwrap_or(d.n_values),
        ave_values: a.ave_values.clone().unwrap_or(d.ave_values),
        samples_per_cell: a.samples.unwrap_or(d.samples_per_cell),
        horizon: a.horizon.unwrap_or(d.horizon),
    };
    grid.validate()?;
    let seed = a.seed.unwrap_or(0);
    let sink = Sink::new(&a, false, "sweep")?;
    let effective = json!({
        "command": "sweep",
        "grid": grid,
        "seed": seed,
        "out": sink.dir,
        "format": sink.formats,
    });
    sink.echo(&effective)?;

    let cells = faction_sweep(&grid, seed, &ToleranceConfig::default())?;
    if sink.wants(Format::Csv) {
        sink.write("sweep.csv", &sweep_csv(&cells)?)?;
    }
    sink.json("sweep.json", &effective, &cells)?;
    for c in &cells {
        println!(
            "n={} ave={:?}: one={} two={} indeterminate={} class={:?}",
            c.n, c.ave, c.one_faction, c.two_factions, c.indeterminate, c.class
        );
    }
    Ok(())
}

pub fn classify(flags: ClassifyArgs, file: Option<&Path>) -> Res {
    let a = layered(flags, file)?;
    let input = existing(a.input.clone(), "input")?;
    let sink = Sink::new(&a, true, "classify")?;
    let effective = json!({
        "command": "classify",
        "input": input,
        "out": sink.dir,
        "format": sink.formats,
    });
    sink.echo(&effective)?;

    let x = read_input(&input)?;
    let tol = ToleranceConfig::default();
    let report = is_balanced_multi(&x, &tol);
    let q_hbm = classify_q_hbm(&x, &tol);
    let q_ibm = classify_q_ibm(&x, &tol);
    let text = format!(
        "n: {}\nnz_row: {}\ns_symm_pos: {}\nrs_symm_pos: {}\n{}{}{}",
        x.n(),
        x.is_nz_row(&tol),
        x.is_s_symm_pos(&tol),
        x.is_rs_symm_pos(&tol),
        balance_report_text(&report),
        fixed_point_text("q_hbm", &q_hbm),
        fixed_point_text("q_ibm", &q_ibm),
    );
    print!("{text}");
    sink.write("classify.txt", &text)?;
    if sink.wants(Format::Csv) {
        if let Some(p) = &report.factions {
            sink.write("partition.csv", &partition_csv(p)?)?;
        }
    }
    let result = json!({
        "balance": report,
        "faction_counts": faction_count(&x, &tol),
        "q_hbm": q_hbm,
        "q_ibm": q_ibm,
    });
    sink.json("classify.json", &effective, &result)?;
    if sink.wants(Format::Heatmap) {
        emit_heatmap(&x, &HeatmapSpec::default(), &tol, &sink.dir.join("matrix.pgm"))?;
    }
    Ok(())
}
