use std::fmt::Write as _;
use std::time::Instant;

use serde_json::{json, Value};

use super::bench::{parse_grid, rows_to_csv, run_bench, BenchConfig, BenchFamily};
use super::format::{read_state, state_to_string, to_json, write_text, LoadedState};
use super::*;
use crate::concurrence::{evaluate, Method, OPERATOR_FORM_CAP};
use crate::error::{bail_arg, Error};
use crate::linalg::{seeded_rng, DimSpec};
use crate::separability::{
    hollowizing_unitary, ppt_oracle, pure_state_check, s_matrix, sample_witness_detection, wootters_oracle,
    DecompositionSize, DetectionConfig, HollowOptions, Verdict, ViolationTolerance,
};
use crate::states::{self, DensityMatrix};
use crate::witness::{bipartite_basis_witness, multipartite_cut_witness, semi_random_bipartite, semi_random_multipartite, WitnessOperator};

#[derive(Clone, Debug, PartialEq)]
pub enum Machine {
    Json(Value),
    Text(String),
}

/// Result of one command: a summary for people and a document for programs.
#[derive(Clone, Debug, PartialEq)]
pub struct CommandOutput {
    pub human: String,
    pub machine: Machine,
    /// Print the machine document when no `--out` is given (state generation).
    pub machine_by_default: bool,
}

impl CommandOutput {
    pub fn machine_text(&self) -> Result<String> {
        match &self.machine {
            Machine::Json(v) => to_json(v),
            Machine::Text(t) => Ok(t.clone()),
        }
    }

    pub(super) fn emit(&self, global: &GlobalOpts) -> Result<()> {
        let text = self.machine_text()?;
        if let Some(path) = &global.out {
            write_text(path, &text)?;
        }
        if global.json || (self.machine_by_default && global.out.is_none()) {
            print!("{text}");
        } else {
            print!("{}", self.human);
            if let Some(path) = &global.out {
                println!("wrote {}", path.display());
            }
        }
        Ok(())
    }
}

fn seed(global: &GlobalOpts) -> u64 {
    global.seed.unwrap_or(0)
}

fn tolerance(global: &GlobalOpts) -> Result<ViolationTolerance> {
    let mut tol = ViolationTolerance::default();
    if let Some(t) = global.tol {
        if !(t.is_finite() && t >= 0.0) {
            bail_arg!("--tol must be a non-negative number");
        }
        tol.relative = t;
    }
    Ok(tol)
}

fn f6(x: f64) -> String {
    format!("{x:.6}")
}

pub(super) fn dispatch(cli: &Cli) -> Result<CommandOutput> {
    let start = Instant::now();
    let g = &cli.global;
    let mut out = match &cli.command {
        Command::Gen(a) => gen(a, g),
        Command::Concurrence(a) => concurrence(a),
        Command::Detect(a) => detect(a, g),
        Command::Oracle(a) => oracle(a),
        Command::Hollow(a) => hollow(a, g),
        Command::Bench(a) => bench(a, g),
        Command::Validate(a) => validate(a),
    }?;
    if g.timing {
        let secs = start.elapsed().as_secs_f64();
        if let Machine::Json(Value::Object(map)) = &mut out.machine {
            map.insert("wall_time_s".into(), json!(secs));
        }
        let _ = writeln!(out.human, "wall time: {secs:.3} s");
    }
    Ok(out)
}

fn need<T: Copy>(v: Option<T>, flag: &str, family: &str) -> Result<T> {
    v.ok_or_else(|| Error::Argument(format!("{family} needs --{flag}")))
}

fn gen(a: &GenArgs, g: &GlobalOpts) -> Result<CommandOutput> {
    let seed = seed(g);
    let mut rng = seeded_rng(seed);
    let dims = || -> Result<DimSpec> {
        let d = a.dims.clone().ok_or_else(|| Error::Argument("this family needs --dims".into()))?;
        DimSpec::new(d)
    };
    let (name, state): (&str, LoadedState) = match a.family {
        Family::Ghz => ("ghz", states::ghz(need(a.n, "n", "ghz")?, a.d.unwrap_or(2))?.into()),
        Family::W => ("w", states::w_state(need(a.n, "n", "w")?)?.into()),
        Family::Bell => ("bell", states::bell().into()),
        Family::Werner => ("werner", states::werner_2qubit(need(a.p, "p", "werner")?)?.into()),
        Family::Isotropic => (
            "isotropic",
            states::isotropic(a.d.unwrap_or(3), need(a.p, "p", "isotropic")?)?.into(),
        ),
        Family::RandomPure => ("random-pure", states::random_pure(&dims()?, &mut rng).into()),
        Family::RandomMixed => {
            let d = dims()?;
            let rank = a.rank.unwrap_or(d.total());
            ("random-mixed", states::random_mixed(&d, rank, &mut rng)?.into())
        }
        Family::RandomSeparable => (
            "random-separable",
            states::random_separable_mixture(&dims()?, a.terms, &mut rng)?.into(),
        ),
        Family::Product => ("product", states::random_product_pure(&dims()?, &mut rng).into()),
    };
    let human = format!(
        "generated {name} state, dims {}, {} (seed {seed})\n",
        state.dims(),
        state.kind()
    );
    Ok(CommandOutput {
        human,
        machine: Machine::Text(state_to_string(&state)?),
        machine_by_default: true,
    })
}

fn load(path: &std::path::Path) -> Result<LoadedState> {
    read_state(path)
}

fn concurrence(a: &ConcurrenceArgs) -> Result<CommandOutput> {
    let psi = match load(&a.state)? {
        LoadedState::Pure(p) => p,
        LoadedState::Mixed(_) => {
            bail_arg!(
                "concurrence is defined here for pure states only; mixed states need the convex-roof \
                 extension, which this tool does not compute (use `detect` or `oracle` instead)"
            )
        }
    };
    let methods: Vec<Method> = match a.method {
        MethodArg::All => {
            let mut m = vec![Method::Cut, Method::Purity];
            if psi.dims().total() <= OPERATOR_FORM_CAP {
                m.push(Method::Operator);
            }
            m
        }
        MethodArg::Purity => vec![Method::Purity],
        MethodArg::Cut => vec![Method::Cut],
        MethodArg::Operator => vec![Method::Operator],
    };
    let mut values = serde_json::Map::new();
    let mut computed = Vec::new();
    for m in &methods {
        let v = evaluate(&psi, *m)?;
        values.insert(m.name().into(), json!(v));
        computed.push((m.name(), v));
    }
    let hi = computed.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    let lo = computed.iter().map(|c| c.1).fold(f64::INFINITY, f64::min);
    let discrepancy = hi - lo;
    let mut human = format!("concurrence: {}\n", f6(computed[0].1));
    if computed.len() > 1 {
        for (name, v) in &computed {
            let _ = writeln!(human, "  {name:<9} {}", f6(*v));
        }
        let _ = writeln!(human, "  max discrepancy {discrepancy:.3e}");
    }
    let machine = json!({
        "command": "concurrence",
        "state": a.state.display().to_string(),
        "dims": psi.dims().dims(),
        "values": values,
        "max_discrepancy": discrepancy,
    });
    Ok(CommandOutput {
        human,
        machine: Machine::Json(machine),
        machine_by_default: false,
    })
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Entangled => "Entangled",
        Verdict::Inconclusive => "Inconclusive",
    }
}

fn detect(a: &DetectArgs, g: &GlobalOpts) -> Result<CommandOutput> {
    let state = load(&a.state)?;
    let tol = tolerance(g)?;
    let cfg = DetectionConfig {
        trials: a.trials,
        master_seed: seed(g),
        tolerance: tol,
        full_stats: a.full_stats,
    };
    let state_id = a.state.display().to_string();
    let rho = state.to_density();
    let sampling = sample_witness_detection(&rho, &state_id, &cfg)?;
    let mut human = String::new();
    let (verdict, pure) = match &state {
        LoadedState::Pure(p) => {
            let check = pure_state_check(p)?;
            let v = if check.separable { "Separable" } else { "Entangled" };
            (v, Some(check))
        }
        LoadedState::Mixed(_) => (verdict_name(sampling.verdict), None),
    };
    let _ = writeln!(human, "verdict: {verdict}");
    if let Some(c) = &pure {
        let _ = writeln!(human, "route: pure-state check ({} operators)", c.operators_checked);
        let _ = writeln!(human, "max overlap: {}", f6(c.max_overlap));
        if let Some(w) = &c.worst {
            let _ = writeln!(human, "largest overlap at: {w}");
        }
    } else {
        let _ = writeln!(human, "route: random witnesses");
    }
    let _ = writeln!(human, "trials run: {} of {}", sampling.trials_run, sampling.trials);
    let _ = writeln!(human, "violations: {}", sampling.violations);
    match sampling.first_violation_trial {
        Some(t) => {
            let _ = writeln!(human, "first violation trial: {t}");
        }
        None => {
            let _ = writeln!(human, "first violation trial: none");
        }
    }
    let _ = writeln!(human, "max relative margin: {}", f6(sampling.max_relative_margin));
    let machine = json!({
        "command": "detect",
        "state": state_id,
        "dims": state.dims().dims(),
        "kind": state.kind(),
        "seed": cfg.master_seed,
        "trials": cfg.trials,
        "full_stats": cfg.full_stats,
        "tolerance": tol,
        "verdict": verdict,
        "pure_check": pure,
        "sampling": sampling,
    });
    Ok(CommandOutput {
        human,
        machine: Machine::Json(machine),
        machine_by_default: false,
    })
}

fn oracle(a: &OracleArgs) -> Result<CommandOutput> {
    let state = load(&a.state)?;
    let rho = state.to_density();
    if a.subsystem == 0 || a.subsystem > rho.dims().parties() {
        bail_arg!("--subsystem must lie in 1..={}", rho.dims().parties());
    }
    let ppt = ppt_oracle(&rho, a.subsystem - 1)?;
    let wootters = if rho.dims().dims() == [2, 2] { Some(wootters_oracle(&rho)?) } else { None };
    let mut human = format!(
        "PPT: {}\nmin partial-transpose eigenvalue: {}\nnegativity: {}\n",
        match ppt.verdict {
            crate::separability::PptVerdict::Ppt => "PPT",
            crate::separability::PptVerdict::Npt => "NPT (entangled)",
        },
        f6(ppt.min_eigenvalue),
        f6(ppt.negativity)
    );
    if !ppt.conclusive {
        human.push_str("note: PPT does not decide separability for these dimensions\n");
    }
    if let Some(c) = wootters {
        let _ = writeln!(human, "two-qubit concurrence: {}", f6(c));
    }
    let machine = json!({
        "command": "oracle",
        "state": a.state.display().to_string(),
        "dims": rho.dims().dims(),
        "subsystem": a.subsystem,
        "ppt": ppt,
        "wootters_concurrence": wootters,
    });
    Ok(CommandOutput {
        human,
        machine: Machine::Json(machine),
        machine_by_default: false,
    })
}

fn parse_list(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<usize>()
                .ok()
                .filter(|&v| v >= 1)
                .ok_or_else(|| Error::Argument(format!("bad 1-based index '{x}'")))
        })
        .collect()
}

fn zero_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x - 1).collect()
}

pub(super) fn parse_witness(spec: &str, dims: &DimSpec, cut: usize, seed: u64) -> Result<WitnessOperator> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["basis", idx] => {
            let v = parse_list(idx)?;
            if v.len() != 4 {
                bail_arg!("basis witness needs four indices i,i',j,j'");
            }
            bipartite_basis_witness(dims, v[0] - 1, v[1] - 1, v[2] - 1, v[3] - 1)
        }
        ["cut", k, rows, cols] => {
            let k = parse_list(k)?;
            if k.len() != 1 {
                bail_arg!("cut witness needs a single subsystem index");
            }
            multipartite_cut_witness(dims, k[0] - 1, &zero_based(&parse_list(rows)?), &zero_based(&parse_list(cols)?))
        }
        ["random"] => {
            let mut rng = seeded_rng(seed);
            if dims.parties() == 2 {
                semi_random_bipartite(dims, &mut rng)
            } else {
                if cut == 0 {
                    bail_arg!("--cut is 1-based");
                }
                semi_random_multipartite(dims, cut - 1, &mut rng)
            }
        }
        _ => bail_arg!("unknown witness spec '{spec}'"),
    }
}

fn hollow(a: &HollowArgs, g: &GlobalOpts) -> Result<CommandOutput> {
    let state = load(&a.state)?;
    let rho: DensityMatrix = state.to_density();
    let o = parse_witness(&a.witness, rho.dims(), a.cut, seed(g))?;
    let s = s_matrix(&rho, &o)?;
    let size = match (a.padded, a.size) {
        (Some(m), _) => DecompositionSize::Padded(m),
        (None, SizeArg::Auto) => DecompositionSize::Auto,
        (None, SizeArg::Square) => DecompositionSize::Square,
    };
    let mut opts = HollowOptions {
        max_iter: a.max_iter,
        size,
        seed: seed(g),
        ..Default::default()
    };
    if let Some(t) = g.tol {
        opts.hollow_tol = t;
    }
    let cert = hollowizing_unitary(&s, &opts)?;
    let mut human = String::new();
    let _ = writeln!(human, "witness: {}", o.label());
    let _ = writeln!(
        human,
        "singular values: [{}]",
        cert.singular_values.iter().map(|v| f6(*v)).collect::<Vec<_>>().join(", ")
    );
    let _ = writeln!(
        human,
        "condition: {} (margin {})",
        if cert.condition_holds { "holds" } else { "violated" },
        f6(cert.margin)
    );
    let _ = writeln!(human, "decomposition size: {} (matrix side {})", cert.size(), cert.side);
    let _ = writeln!(human, "max |diagonal|: {:.3e} (floor {:.3e})", cert.max_abs_diagonal, cert.diagonal_floor);
    let _ = writeln!(human, "converged: {} after {} iterations", cert.converged, cert.iterations);
    let u = &cert.u;
    let grid = |f: fn(&num_complex::Complex64) -> f64| -> Vec<Vec<f64>> {
        (0..u.rows()).map(|r| (0..u.cols()).map(|c| f(&u[(r, c)])).collect()).collect()
    };
    let machine = json!({
        "command": "hollow",
        "state": a.state.display().to_string(),
        "dims": rho.dims().dims(),
        "witness": o.label(),
        "seed": seed(g),
        "hollow_tol": opts.hollow_tol,
        "max_iter": opts.max_iter,
        "singular_values": cert.singular_values,
        "margin": cert.margin,
        "condition_holds": cert.condition_holds,
        "diagonal_floor": cert.diagonal_floor,
        "max_abs_diagonal": cert.max_abs_diagonal,
        "converged": cert.converged,
        "iterations": cert.iterations,
        "construction": format!("{:?}", cert.construction).to_lowercase(),
        "side": cert.side,
        "size": cert.size(),
        "u": { "re": grid(|z| z.re), "im": grid(|z| z.im) },
    });
    Ok(CommandOutput {
        human,
        machine: Machine::Json(machine),
        machine_by_default: false,
    })
}

fn bench(a: &BenchArgs, g: &GlobalOpts) -> Result<CommandOutput> {
    let family = match a.family {
        BenchFamilyArg::Werner => BenchFamily::Werner,
        BenchFamilyArg::Isotropic => BenchFamily::Isotropic { d: a.d },
        BenchFamilyArg::Schmidt => BenchFamily::Schmidt {
            d: a.d,
            visibility: a.visibility,
        },
    };
    let cfg = BenchConfig {
        family,
        grid: parse_grid(&a.param_grid)?,
        trials: a.trials,
        reps: a.reps,
        seed: seed(g),
        tolerance: tolerance(g)?,
    };
    let rows = run_bench(&cfg)?;
    let mut human = format!(
        "{} benchmark, {} reps x {} trials, seed {} (oracle: {})\n{:>8} {:>10} {:>8} {:>10} {:>6}\n",
        family.name(),
        cfg.reps,
        cfg.trials,
        cfg.seed,
        family.oracle_name(),
        "param",
        "oracle",
        "median",
        "mean",
        "rate"
    );
    for r in &rows {
        let _ = writeln!(
            human,
            "{:>8.4} {:>10.6} {:>8.1} {:>10.2} {:>6.2}",
            r.param, r.oracle, r.median_first_violation, r.mean_first_violation, r.violation_rate
        );
    }
    Ok(CommandOutput {
        human,
        machine: Machine::Text(rows_to_csv(&rows)),
        machine_by_default: false,
    })
}

fn validate(a: &StateArg) -> Result<CommandOutput> {
    let state = load(&a.state)?;
    let rho = state.to_density();
    let ev = rho.eigenvalues();
    let min = ev.last().copied().unwrap_or(0.0);
    let trace = rho.matrix().trace().re;
    let purity = rho.purity();
    let human = format!(
        "valid {} state, dims {}\ntrace: {}\npurity: {}\nmin eigenvalue: {}\n",
        state.kind(),
        state.dims(),
        f6(trace),
        f6(purity),
        f6(min)
    );
    let machine = json!({
        "command": "validate",
        "state": a.state.display().to_string(),
        "valid": true,
        "kind": state.kind(),
        "dims": state.dims().dims(),
        "trace": trace,
        "purity": purity,
        "min_eigenvalue": min,
    });
    Ok(CommandOutput {
        human,
        machine: Machine::Json(machine),
        machine_by_default: false,
    })
}
