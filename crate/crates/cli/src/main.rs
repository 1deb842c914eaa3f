use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use matchcliff::circuit::{parse_bits, Circuit, CircuitFile, Structure};
use matchcliff::encoding::{recover_cz_swap_circuit, Encoding, EncodingMatrix};
use matchcliff::oracle::{apply_circuit, MAX_QUBITS};
use matchcliff::pauli::PauliString;
use matchcliff::simulator::{
    classify_circuit, compile, ghz4_gadget, run_expectation, run_marginal, CompiledCircuit,
};
use matchcliff::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

const CHECK_TOL: f64 = 1e-9;

#[derive(Parser)]
#[command(
    name = "matchcliff",
    version,
    about = "Clifford-augmented matchgate simulator"
)]
struct Cli {
    /// Print one JSON object instead of key=value lines.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pauli expectation value.
    Expect {
        file: PathBuf,
        #[arg(long)]
        pauli: String,
    },
    /// Marginal probability of a bitstring on a set of qubits.
    Marginal {
        file: PathBuf,
        /// Comma-separated qubit indices.
        #[arg(long, value_delimiter = ',', required = true)]
        qubits: Vec<usize>,
        #[arg(long)]
        bits: String,
    },
    /// Simulability class of a circuit, or structure of an encoding.
    Classify {
        #[arg(required_unless_present = "encoding", conflicts_with = "encoding")]
        file: Option<PathBuf>,
        #[arg(long)]
        encoding: Option<PathBuf>,
    },
    /// Compare random supported queries against the dense state vector.
    OracleCheck {
        file: PathBuf,
        #[arg(long, default_value_t = 50)]
        queries: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the GHZ4 gadget circuit file.
    Gadget,
}

enum Failure {
    Input(String),
    Unsupported(String),
    Check(Record),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unsupported(r) => Failure::Unsupported(r),
            Error::DegreeTooLarge { .. } => Failure::Unsupported(e.to_string()),
            other => Failure::Input(other.to_string()),
        }
    }
}

type Record = Vec<(&'static str, Value)>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_circuit(path: &Path) -> Result<Circuit, Failure> {
    let text = read(path)?;
    Ok(CircuitFile::from_json(&text)?.to_circuit()?)
}

fn load_compiled(path: &Path) -> Result<CompiledCircuit, Failure> {
    Ok(compile(&load_circuit(path)?)?)
}

fn structure_name(s: Structure) -> &'static str {
    match s {
        Structure::Conjugated => "conjugated",
        Structure::PostClifford => "post_clifford",
        Structure::Free => "free",
    }
}

fn cmd_expect(file: &Path, pauli: &str) -> Result<Record, Failure> {
    let c = load_compiled(file)?;
    let p: PauliString = pauli.parse()?;
    let out = run_expectation(&c, &p)?;
    Ok(vec![
        ("value", json!(out.value)),
        ("method", json!(out.method)),
        ("class", json!(out.capability.to_string())),
    ])
}

fn cmd_marginal(file: &Path, qubits: &[usize], bits: &str) -> Result<Record, Failure> {
    let c = load_compiled(file)?;
    let bits = parse_bits(bits)?;
    let out = run_marginal(&c, qubits, &bits)?;
    Ok(vec![
        ("probability", json!(out.value)),
        ("class", json!(out.capability.to_string())),
        ("method", json!(out.method)),
    ])
}

fn cmd_classify_circuit(file: &Path) -> Result<Record, Failure> {
    let c = load_circuit(file)?;
    let class = classify_circuit(&c)?;
    let mut rec: Record = vec![
        ("structure", json!(structure_name(c.structure))),
        ("capabilities", json!(class.summary())),
    ];
    if let Some(k) = class.conjugation {
        rec.push(("conjugation", json!(k.to_string())));
    }
    Ok(rec)
}

fn cmd_classify_encoding(path: &Path) -> Result<Record, Failure> {
    let e = Encoding::parse(&read(path)?)?;
    let mut rec: Record = vec![("qubits", json!(e.num_qubits()))];
    if let Err(v) = e.validate() {
        let list: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        rec.push(("valid", json!(false)));
        rec.push(("violations", json!(list.join("; "))));
        rec.push(("summary", json!("invalid")));
        return Ok(rec);
    }
    rec.push(("valid", json!(true)));
    let recovered = EncodingMatrix::from_encoding(&e).and_then(|m| recover_cz_swap_circuit(&m));
    match recovered {
        Ok(r) => {
            let family = if r.cz_count() == 0 {
                "SWAP+reorder"
            } else {
                "CZ+SWAP"
            };
            let gates: Vec<String> = r.gates.iter().map(|g| g.to_string()).collect();
            let circuit = if gates.is_empty() {
                "identity".to_string()
            } else {
                gates.join(" ")
            };
            let order: Vec<String> = r.mode_order.iter().map(|k| k.to_string()).collect();
            rec.push(("class", json!(family)));
            rec.push(("circuit", json!(circuit)));
            rec.push(("mode_order", json!(order.join(","))));
            rec.push((
                "summary",
                json!(format!("valid, {family}, circuit: {circuit}")),
            ));
        }
        Err(err) => {
            rec.push(("class", json!("general")));
            rec.push(("reason", json!(err.to_string())));
            rec.push(("summary", json!("valid, general (not CZ+SWAP)")));
        }
    }
    Ok(rec)
}

/// A Pauli the circuit can answer: arbitrary for free and post-Clifford
/// circuits, a pulled-back Majorana monomial of degree <= 4 otherwise.
fn random_pauli(c: &CompiledCircuit, rng: &mut ChaCha8Rng) -> PauliString {
    let n = c.n;
    if c.structure != Structure::Conjugated || rng.gen_bool(0.2) {
        return PauliString::random(n, rng).unsigned();
    }
    let jw = Encoding::jordan_wigner(n);
    let degree = if n >= 2 && rng.gen_bool(0.5) { 4 } else { 2 };
    let mut idx: Vec<usize> = (0..2 * n).collect();
    for i in 0..degree {
        let j = rng.gen_range(i..2 * n);
        idx.swap(i, j);
    }
    idx.truncate(degree);
    idx.sort_unstable();
    let m = jw.monomial(&idx);
    c.frame.invert().conjugate_pauli(&m).unsigned()
}

fn cmd_oracle_check(file: &Path, queries: usize, seed: u64) -> Result<Record, Failure> {
    let circuit = load_circuit(file)?;
    if circuit.n > MAX_QUBITS {
        return Err(Failure::Input(format!(
            "{} qubits exceeds the dense oracle cap of {MAX_QUBITS}",
            circuit.n
        )));
    }
    let c = compile(&circuit)?;
    let psi = apply_circuit(&circuit)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut checked, mut skipped, mut worst) = (0usize, 0usize, 0.0f64);
    for _ in 0..queries {
        let result = if rng.gen_bool(0.5) {
            let p = random_pauli(&c, &mut rng);
            run_expectation(&c, &p).map(|o| (o.value, psi.expectation(&p).re))
        } else {
            let k = rng.gen_range(1..=c.n);
            let mut qs: Vec<usize> = (0..c.n).collect();
            for i in 0..c.n {
                let j = rng.gen_range(i..c.n);
                qs.swap(i, j);
            }
            qs.truncate(k);
            let bits: Vec<bool> = (0..k).map(|_| rng.gen_bool(0.5)).collect();
            match run_marginal(&c, &qs, &bits) {
                Ok(o) => Ok((o.value, psi.marginal(&qs, &bits)?)),
                Err(e) => Err(e),
            }
        };
        match result {
            Ok((got, want)) => {
                checked += 1;
                worst = worst.max((got - want).abs());
            }
            Err(Error::Unsupported(_)) | Err(Error::DegreeTooLarge { .. }) => skipped += 1,
            Err(e) => return Err(e.into()),
        }
    }
    let pass = worst <= CHECK_TOL;
    let rec: Record = vec![
        ("checked", json!(checked)),
        ("skipped", json!(skipped)),
        ("max_deviation", json!(worst)),
        ("tolerance", json!(CHECK_TOL)),
        ("result", json!(if pass { "pass" } else { "fail" })),
    ];
    if pass {
        Ok(rec)
    } else {
        Err(Failure::Check(rec))
    }
}

fn emit(rec: &Record, as_json: bool) {
    if as_json {
        let map: Map<String, Value> = rec
            .iter()
            .map(|(k, v)| (k.to_string(), v.clone()))
            .collect();
        println!("{}", Value::Object(map));
    } else {
        for (k, v) in rec {
            match v {
                Value::String(s) => println!("{k}={s}"),
                other => println!("{k}={other}"),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Expect { file, pauli } => cmd_expect(file, pauli),
        Command::Marginal { file, qubits, bits } => cmd_marginal(file, qubits, bits),
        Command::Classify {
            file: Some(f),
            encoding: None,
        } => cmd_classify_circuit(f),
        Command::Classify {
            encoding: Some(e), ..
        } => cmd_classify_encoding(e),
        Command::Classify { .. } => Err(Failure::Input("nothing to classify".into())),
        Command::OracleCheck {
            file,
            queries,
            seed,
        } => cmd_oracle_check(file, *queries, *seed),
        Command::Gadget => {
            println!("{}", CircuitFile::from_circuit(&ghz4_gadget()).to_json());
            return ExitCode::SUCCESS;
        }
    };
    match result {
        Ok(rec) => {
            emit(&rec, cli.json);
            ExitCode::SUCCESS
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Unsupported(reason)) => {
            emit(&vec![("unsupported", json!(reason))], cli.json);
            ExitCode::from(2)
        }
        Err(Failure::Check(rec)) => {
            emit(&rec, cli.json);
            ExitCode::from(3)
        }
    }
}
