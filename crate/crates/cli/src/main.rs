//! Command-line front end: parse, validate, reduce, weight, synthesize,
//! simulate, compare, and report, with `-` standing for stdin/stdout.
//!
//! Exit codes: 0 success, 1 validation/verification/data failure, 2 usage
//! error. Diagnostics go to stderr; data goes to stdout or `--out`.

use anyhow::{anyhow, bail, Context, Result};
use bddqsp::blockenc::{extract_block, gram_encoding, projector_encoding, ControlledFamily};
use bddqsp::circuit::{embedded_source, synth_phase, synth_state, Circuit};
use bddqsp::families::{
    amplification_ratio, binomial_wobdd, h_family_fbdd, symmetric_obdd, DeltaFamilySpec,
    SymmetricSpec,
};
use bddqsp::generate::{random_wfbdd, GenConfig};
use bddqsp::simulator::{brute_force_state, compare, simulate, simulate_dense, AncillaSpec};
use bddqsp::weighting::{model_count, uniform_weights};
use bddqsp::Diagram;
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::io::{Read, Write};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bddqsp", version, about = "Weighted free BDDs as quantum state descriptions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every structural invariant of a diagram file.
    Validate { input: String },
    /// Apply the contraction rules to a fixpoint.
    Reduce {
        input: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Evaluate the Boolean function on one input.
    Eval {
        input: String,
        /// Input bits, e.g. 1011 for x1=1, x2=0, x3=1, x4=1.
        #[arg(long)]
        x: String,
    },
    /// Count satisfying assignments.
    Count { input: String },
    /// Assign uniform-superposition weights.
    Uniform {
        input: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Synthesize the state-preparation circuit for a weighted diagram.
    Synth {
        input: String,
        #[arg(long)]
        out: Option<String>,
    },
    /// Synthesize the phase oracle for an unweighted diagram.
    SynthPhase {
        input: String,
        /// Phase angle in radians.
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Simulate a circuit file on the sparse backend.
    Sim {
        input: String,
        /// Compare against the amplitude oracle of the embedded source
        /// diagram (or an explicit diagram file given as value).
        #[arg(long, num_args = 0..=1, default_missing_value = "")]
        compare_oracle: Option<String>,
        /// Cross-check the sparse state against the dense simulator.
        #[arg(long)]
        dense_check: bool,
        /// Fidelity tolerance for --compare-oracle (1 - fidelity <= tol).
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Emit a family diagram.
    Family {
        #[arg(value_enum)]
        which: FamilyKind,
        #[arg(long)]
        n: usize,
        /// Target count for the symmetric family.
        #[arg(long)]
        i: Option<usize>,
        /// Decay for the binomial family.
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        out: Option<String>,
    },
    /// Evaluate the amplitude-amplification ratio of the binomial family.
    Ratio {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        delta: f64,
        #[arg(long)]
        csv: bool,
    },
    /// Construct a block encoding and dump its verified block.
    Blockenc {
        #[arg(value_enum)]
        which: BlockKind,
        input: String,
        /// Controlled family for the Gram encoding.
        #[arg(long, value_enum, default_value_t = FamilyGates::Z)]
        family: FamilyGates,
        /// Emit the circuit instead of the extracted block matrix.
        #[arg(long)]
        emit_circuit: bool,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run a benchmark suite and report per-diagram statistics.
    Bench {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long)]
        csv: bool,
        /// Generator seed; falls back to BDDQSP_SEED, then 1234.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    Symmetric,
    H,
    Binomial,
}

#[derive(Clone, Copy, ValueEnum)]
enum BlockKind {
    Projector,
    Gram,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyGates {
    Identity,
    Z,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Random,
    Binomial,
    Symmetric,
    H,
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .context("reading standard input")?;
        Ok(text)
    } else {
        std::fs::read_to_string(path).with_context(|| format!("reading {path}"))
    }
}

fn write_output(out: &Option<String>, data: &str) -> Result<()> {
    match out.as_deref() {
        None | Some("-") => {
            std::io::stdout()
                .write_all(data.as_bytes())
                .context("writing standard output")?;
        }
        Some(path) => {
            std::fs::write(path, data).with_context(|| format!("writing {path}"))?;
        }
    }
    Ok(())
}

fn load_diagram(path: &str) -> Result<Diagram> {
    let text = read_input(path)?;
    Diagram::parse(&text).map_err(|e| anyhow!("{}: {e}", display_name(path)))
}

fn display_name(path: &str) -> &str {
    if path == "-" {
        "<stdin>"
    } else {
        path
    }
}

fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => bail!("input bits must be 0/1, got `{other}`"),
        })
        .collect()
}

/// Ancilla expectations of a state circuit re-derived from its source
/// diagram: node qubits follow the variable register in ascending node id,
/// with the root pinned at one.
fn state_ancillas(d: &Diagram) -> AncillaSpec {
    let n = d.var_count();
    let expected = d
        .internal_ids()
        .enumerate()
        .map(|(offset, id)| (n + offset, id == d.root()))
        .collect();
    AncillaSpec { expected }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Validate { input } => {
            let d = load_diagram(&input)?;
            let report = d.validate();
            println!("{report}");
            Ok(if report.is_valid() { 0 } else { 1 })
        }
        Command::Reduce { input, out } => {
            let d = load_diagram(&input)?;
            let reduced = d.reduce()?;
            eprintln!(
                "reduced {} -> {} internal nodes",
                d.internal_count(),
                reduced.internal_count()
            );
            write_output(&out, &reduced.serialize())?;
            Ok(0)
        }
        Command::Eval { input, x } => {
            let d = load_diagram(&input)?;
            let report = d.validate();
            if !report.is_semantically_sound() {
                bail!("invalid diagram:\n{report}");
            }
            let bits = parse_bits(&x)?;
            if bits.len() != d.var_count() {
                bail!(
                    "expected {} input bits, got {}",
                    d.var_count(),
                    bits.len()
                );
            }
            println!("{}", d.evaluate(&bits) as u8);
            Ok(0)
        }
        Command::Count { input } => {
            let d = load_diagram(&input)?;
            println!("{}", model_count(&d)?);
            Ok(0)
        }
        Command::Uniform { input, out } => {
            let d = load_diagram(&input)?;
            let result = uniform_weights(&d)?;
            eprintln!(
                "model count {} with {} node queries",
                result.model_count, result.query_count
            );
            write_output(&out, &result.diagram.serialize())?;
            Ok(0)
        }
        Command::Synth { input, out } => {
            let d = load_diagram(&input)?;
            let circuit = synth_state(&d)?;
            write_output(&out, &circuit.serialize_with_source(&d.serialize()))?;
            Ok(0)
        }
        Command::SynthPhase { input, theta, out } => {
            if !theta.is_finite() {
                bail!("phase angle must be finite");
            }
            let d = load_diagram(&input)?;
            let circuit = synth_phase(&d, theta)?;
            write_output(&out, &circuit.serialize_with_source(&d.serialize()))?;
            Ok(0)
        }
        Command::Sim { input, compare_oracle, dense_check, tol, out } => {
            if tol <= 0.0 {
                bail!("tolerance must be positive");
            }
            let text = read_input(&input)?;
            let circuit =
                Circuit::parse(&text).map_err(|e| anyhow!("{}: {e}", display_name(&input)))?;
            let state = simulate(&circuit)?;
            let mut failed = false;
            let comparing = compare_oracle.is_some() || dense_check;
            if let Some(oracle_path) = compare_oracle {
                let source = if oracle_path.is_empty() {
                    embedded_source(&text)
                        .ok_or_else(|| anyhow!("circuit carries no embedded source diagram; pass --compare-oracle <diagram>"))?
                } else {
                    read_input(&oracle_path)?
                };
                let d = Diagram::parse(&source).map_err(|e| anyhow!("oracle diagram: {e}"))?;
                let report = d.validate();
                if !report.is_semantically_sound() {
                    bail!("oracle diagram is invalid:\n{report}");
                }
                let expected_qubits = d.var_count() + d.internal_count();
                if !d.is_weighted() || circuit.qubits != expected_qubits {
                    bail!("--compare-oracle applies to state circuits synthesized from a weighted diagram");
                }
                let oracle = brute_force_state(&d)?;
                let report = compare(&state, &oracle, &state_ancillas(&d))?;
                println!("fidelity {:.17e}", report.fidelity);
                println!("max_amp_error {:.17e}", report.max_abs_amp_error);
                println!("ancillas_clean {}", report.ancilla_factorized);
                if 1.0 - report.fidelity > tol || !report.ancilla_factorized {
                    failed = true;
                }
            }
            if dense_check {
                let dense = simulate_dense(&circuit, None)?;
                let mut max_diff = 0.0f64;
                for (k, amp) in dense.iter().enumerate() {
                    max_diff = max_diff.max((state.amp(k as u64) - amp).norm());
                }
                println!("dense_max_diff {max_diff:.17e}");
                if max_diff > 1e-12 {
                    failed = true;
                }
            }
            if !comparing || out.is_some() {
                write_output(&out, &state.dump())?;
            }
            Ok(if failed { 1 } else { 0 })
        }
        Command::Family { which, n, i, delta, out } => {
            let d = match which {
                FamilyKind::Symmetric => {
                    let i = i.ok_or_else(|| anyhow!("symmetric family needs --i"))?;
                    symmetric_obdd(SymmetricSpec { n, i })?
                }
                FamilyKind::H => h_family_fbdd(n)?,
                FamilyKind::Binomial => {
                    let delta = delta.ok_or_else(|| anyhow!("binomial family needs --delta"))?;
                    binomial_wobdd(DeltaFamilySpec { n, delta })?
                }
            };
            write_output(&out, &d.serialize())?;
            Ok(0)
        }
        Command::Ratio { n, delta, csv } => {
            let r = amplification_ratio(DeltaFamilySpec { n, delta })?;
            if csv {
                println!("n,delta,direct_ratio,closed_form,relative_difference");
                println!(
                    "{n},{delta},{:.17e},{:.17e},{:.17e}",
                    r.direct_ratio, r.closed_form, r.relative_difference
                );
            } else {
                println!("direct_ratio {:.17e}", r.direct_ratio);
                println!("closed_form {:.17e}", r.closed_form);
                println!("relative_difference {:.17e}", r.relative_difference);
            }
            Ok(0)
        }
        Command::Blockenc { which, input, family, emit_circuit, out } => {
            let d = load_diagram(&input)?;
            let spec = match which {
                BlockKind::Projector => projector_encoding(&d)?,
                BlockKind::Gram => {
                    let fam = match family {
                        FamilyGates::Identity => ControlledFamily::identity(d.var_count()),
                        FamilyGates::Z => ControlledFamily::z_family(d.var_count()),
                    };
                    gram_encoding(&d, &fam)?
                }
            };
            match spec.epsilon {
                Some(eps) => eprintln!("verified block error {eps:.3e}"),
                None => eprintln!(
                    "warning: {} qubits exceed the verification cap; construction emitted unverified",
                    spec.circuit.qubits
                ),
            }
            if emit_circuit || spec.epsilon.is_none() {
                write_output(&out, &spec.circuit.serialize())?;
            } else {
                let block = extract_block(&spec.circuit, d.var_count())?;
                let mut dump = String::new();
                for row in 0..block.nrows() {
                    for col in 0..block.ncols() {
                        let entry = block[(row, col)];
                        dump.push_str(&format!(
                            "{row} {col} {:.16e} {:.16e}\n",
                            entry.re, entry.im
                        ));
                    }
                }
                write_output(&out, &dump)?;
            }
            Ok(if spec.epsilon.is_some_and(|eps| eps > 1e-9) { 1 } else { 0 })
        }
        Command::Bench { suite, csv, seed, out } => {
            let seed = seed
                .or_else(|| {
                    std::env::var("BDDQSP_SEED")
                        .ok()
                        .and_then(|s| s.parse().ok())
                })
                .unwrap_or(1234);
            let rows = run_bench(suite, seed)?;
            let mut data = String::new();
            if csv {
                data.push_str(
                    "name,n,nodes,edges,gates_1q,gates_2q,toffolis,ancillas,fidelity,wall_time_ms\n",
                );
                for r in &rows {
                    data.push_str(&format!(
                        "{},{},{},{},{},{},{},{},{:.12e},{:.3}\n",
                        r.name,
                        r.n,
                        r.nodes,
                        r.edges,
                        r.gates_1q,
                        r.gates_2q,
                        r.toffolis,
                        r.ancillas,
                        r.fidelity,
                        r.wall_time_ms
                    ));
                }
            } else {
                for r in &rows {
                    data.push_str(&format!(
                        "{}: n={} nodes={} edges={} 1q={} 2q={} toffoli={} ancillas={} fidelity={:.12} time={:.3}ms\n",
                        r.name,
                        r.n,
                        r.nodes,
                        r.edges,
                        r.gates_1q,
                        r.gates_2q,
                        r.toffolis,
                        r.ancillas,
                        r.fidelity,
                        r.wall_time_ms
                    ));
                }
            }
            write_output(&out, &data)?;
            let ok = rows.iter().all(|r| r.fidelity >= 1.0 - 1e-9);
            Ok(if ok { 0 } else { 1 })
        }
    }
}

struct BenchRow {
    name: String,
    n: usize,
    nodes: usize,
    edges: usize,
    gates_1q: usize,
    gates_2q: usize,
    toffolis: usize,
    ancillas: usize,
    fidelity: f64,
    wall_time_ms: f64,
}

fn bench_one(name: String, d: &Diagram) -> Result<BenchRow> {
    let start = std::time::Instant::now();
    let circuit = synth_state(d)?;
    let state = simulate(&circuit)?;
    let oracle = brute_force_state(d)?;
    let report = compare(&state, &oracle, &state_ancillas(d))?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;
    let counts = circuit.counts();
    Ok(BenchRow {
        name,
        n: d.var_count(),
        nodes: d.node_count(),
        edges: d.edge_count(),
        gates_1q: counts.one_qubit(),
        gates_2q: counts.two_qubit(),
        toffolis: counts.ccx,
        ancillas: circuit.qubits - d.var_count(),
        fidelity: report.fidelity,
        wall_time_ms: elapsed,
    })
}

fn run_bench(suite: Suite, seed: u64) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    match suite {
        Suite::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..20 {
                let n = 2 + (i % 5);
                let d = random_wfbdd(&mut rng, GenConfig { n, max_internals: 12 });
                rows.push(bench_one(format!("random-{i:02}"), &d)?);
            }
        }
        Suite::Binomial => {
            for n in 2..=8 {
                for delta in [0.25, 0.5, 0.9] {
                    let d = binomial_wobdd(DeltaFamilySpec { n, delta })?;
                    rows.push(bench_one(format!("binomial-n{n}-d{delta}"), &d)?);
                }
            }
        }
        Suite::Symmetric => {
            for n in [4, 6, 8, 10] {
                let i = n / 2;
                let d = symmetric_obdd(SymmetricSpec { n, i })?;
                let weighted = uniform_weights(&d)?.diagram;
                rows.push(bench_one(format!("symmetric-n{n}-i{i}"), &weighted)?);
            }
        }
        Suite::H => {
            for n in 1..=2 {
                let d = h_family_fbdd(n)?;
                let weighted = uniform_weights(&d)?.diagram;
                rows.push(bench_one(format!("h-n{n}"), &weighted)?);
            }
        }
    }
    Ok(rows)
}

/// Die quietly when a downstream pipe closes, like other line-oriented
/// tools, instead of panicking on the failed write.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
