use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use agmc::attack::{
    attack_decrypt, attack_pipeline, Algorithm, AttackOptions, Chain, Route, StageError,
};
use agmc::curve::OnePointCurve;
use agmc::field::Elem;
use agmc::io::{
    read_json, to_json, write_json, CiphertextFile, IoError, MessageFile, PublicKeyFile,
    SecretKeyFile, TranscriptFile,
};
use agmc::mceliece::{decrypt, encrypt, keygen, PublicKey, SchemeError};
use agmc::params::{scheme_params, CurveFamily, ParamError};

const EXIT_FORMAT: u8 = 3;
const EXIT_GUARD: u8 = 4;
const EXIT_STAGE: u8 = 5;

#[derive(Parser)]
#[command(
    name = "agmc",
    version,
    about = "McEliece over AG codes and its key-recovery attack"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Scheme parameters, key size and work factors.
    Params {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        m: usize,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Generate a key pair.
    Keygen {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Keep the coordinate order of the canonical code.
        #[arg(long)]
        no_permute: bool,
        #[arg(long = "pub", default_value = "pub.json")]
        pub_path: PathBuf,
        #[arg(long = "sec", default_value = "sec.json")]
        sec_path: PathBuf,
    },
    /// Encrypt a message; a random one is drawn from the seed if none is given.
    Encrypt {
        #[arg(long = "pub", default_value = "pub.json")]
        pub_path: PathBuf,
        #[arg(long)]
        msg: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Error weight; defaults to t.
        #[arg(long)]
        weight: Option<usize>,
        #[arg(long, default_value = "ct.json")]
        out: PathBuf,
        /// Where to write the drawn message.
        #[arg(long)]
        msg_out: Option<PathBuf>,
    },
    /// Decrypt with the secret key.
    Decrypt {
        #[arg(long = "sec", default_value = "sec.json")]
        sec_path: PathBuf,
        #[arg(long, default_value = "ct.json")]
        ct: PathBuf,
        #[arg(long, default_value = "msg.json")]
        out: PathBuf,
    },
    /// Recover a decoder from the public key alone, optionally decrypting.
    Attack {
        #[arg(long = "pub", default_value = "pub.json")]
        pub_path: PathBuf,
        #[arg(long)]
        ct: Option<PathBuf>,
        #[command(flatten)]
        opts: AttackArgs,
        /// Reuse a transcript instead of running the attack.
        #[arg(long)]
        transcript_in: Option<PathBuf>,
        #[arg(long, default_value = "transcript.json")]
        transcript: PathBuf,
        #[arg(long, default_value = "msg.json")]
        msg_out: PathBuf,
    },
    /// Time key generation, the attack stages and decoding over seeded trials.
    Bench {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        /// Ciphertexts decrypted per trial.
        #[arg(long, default_value_t = 10)]
        ciphertexts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        opts: AttackArgs,
        /// CSV output; stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Hermitian,
    Suzuki,
}

#[derive(Args, Serialize)]
struct CurveArgs {
    #[arg(long, value_enum)]
    curve: Kind,
    /// Hermitian parameter, q = r^2.
    #[arg(long, required_if_eq("curve", "hermitian"))]
    r: Option<u32>,
    /// Suzuki parameter, q = 2 q0^2.
    #[arg(long, required_if_eq("curve", "suzuki"))]
    q0: Option<u32>,
}

impl CurveArgs {
    fn family(&self) -> CurveFamily {
        match self.curve {
            Kind::Hermitian => CurveFamily::Hermitian {
                r: self.r.expect("required by clap"),
            },
            Kind::Suzuki => CurveFamily::Suzuki {
                q0: self.q0.expect("required by clap"),
            },
        }
    }

    fn build(&self) -> Result<OnePointCurve, Failure> {
        let c = match self.family() {
            CurveFamily::Hermitian { r } => OnePointCurve::hermitian(r),
            CurveFamily::Suzuki { q0 } => OnePointCurve::suzuki(q0),
        };
        c.map_err(|e| Failure::new(EXIT_GUARD, e.to_string()))
    }
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum RouteArg {
    Direct,
    Extended,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum ChainArg {
    Target,
    Length,
}

#[derive(Args, Serialize)]
struct AttackArgs {
    /// Filtration driver.
    #[arg(long, default_value = "2", value_parser = ["1", "2"])]
    algorithm: String,
    /// Index chain for algorithm 2: dyadic from t + g, or with the loop bound taken from n.
    #[arg(long, value_enum, default_value = "target")]
    chain: ChainArg,
    /// Distinguished coordinate P.
    #[arg(long)]
    point: Option<usize>,
    /// Force a route instead of choosing from the parameters.
    #[arg(long, value_enum)]
    route: Option<RouteArg>,
}

impl AttackArgs {
    fn options(&self) -> AttackOptions {
        AttackOptions {
            algorithm: if self.algorithm == "1" {
                Algorithm::One
            } else {
                Algorithm::Two
            },
            chain: match self.chain {
                ChainArg::Target => Chain::Target,
                ChainArg::Length => Chain::Length,
            },
            point: self.point,
            route: self.route.map(|r| match r {
                RouteArg::Direct => Route::Direct,
                RouteArg::Extended => Route::Extended,
            }),
            subsets: None,
        }
    }
}

struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn new(code: u8, msg: impl Into<String>) -> Self {
        Failure {
            code,
            msg: msg.into(),
        }
    }
}

impl From<IoError> for Failure {
    fn from(e: IoError) -> Self {
        Failure::new(EXIT_FORMAT, e.to_string())
    }
}

impl From<ParamError> for Failure {
    fn from(e: ParamError) -> Self {
        Failure::new(EXIT_GUARD, e.to_string())
    }
}

impl From<SchemeError> for Failure {
    fn from(e: SchemeError) -> Self {
        match e {
            SchemeError::Parameter(_) => Failure::new(EXIT_GUARD, e.to_string()),
            SchemeError::Length { .. } => Failure::new(EXIT_FORMAT, e.to_string()),
            _ => Failure::new(EXIT_STAGE, format!("[decode] {e}")),
        }
    }
}

impl From<StageError> for Failure {
    fn from(e: StageError) -> Self {
        let code = if e.source.is_guard() {
            EXIT_GUARD
        } else {
            EXIT_STAGE
        };
        Failure::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

/// Echoes the resolved configuration to stderr.
fn log_config<T: Serialize>(name: &str, config: &T) {
    let v = serde_json::json!({ "command": name, "config": config });
    eprintln!("{v}");
}

fn random_message(pk: &PublicKey, seed: u64) -> Vec<Elem> {
    // Independent stream from the error vector's.
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let q = pk.field().order();
    (0..pk.dimension())
        .map(|_| rng.gen_range(0..q) as Elem)
        .collect()
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Params { curve, m, json } => {
            log_config("params", &serde_json::json!({ "curve": curve, "m": m }));
            let r = scheme_params(curve.family(), m)?;
            if json {
                print!("{}", to_json(&r));
            } else {
                print!("{}", params_table(&r));
            }
        }
        Command::Keygen {
            curve,
            m,
            seed,
            no_permute,
            pub_path,
            sec_path,
        } => {
            log_config(
                "keygen",
                &serde_json::json!({
                    "curve": curve, "m": m, "seed": seed, "permute": !no_permute,
                    "pub": pub_path, "sec": sec_path,
                }),
            );
            let c = curve.build()?;
            let (pk, sk) = keygen(&c, m, seed, !no_permute)?;
            write_json(&pub_path, &PublicKeyFile::from_key(&pk))?;
            write_json(&sec_path, &SecretKeyFile::from_key(&sk))?;
            eprintln!("n = {}, k = {}, t = {}", pk.len(), pk.dimension(), pk.t);
        }
        Command::Encrypt {
            pub_path,
            msg,
            seed,
            weight,
            out,
            msg_out,
        } => {
            log_config(
                "encrypt",
                &serde_json::json!({
                    "pub": pub_path, "msg": msg, "seed": seed, "weight": weight,
                    "out": out, "msg_out": msg_out,
                }),
            );
            let pk = read_json::<PublicKeyFile>(&pub_path)?.to_key()?;
            let message = match &msg {
                Some(p) => read_json::<MessageFile>(p)?.to_message(pk.field(), pk.dimension())?,
                None => random_message(&pk, seed),
            };
            let ct = encrypt(&pk, &message, seed, weight)?;
            write_json(&out, &CiphertextFile::from_ciphertext(pk.field(), &ct))?;
            if let Some(p) = msg_out {
                write_json(&p, &MessageFile::new(pk.field(), &message))?;
            }
        }
        Command::Decrypt { sec_path, ct, out } => {
            log_config(
                "decrypt",
                &serde_json::json!({ "sec": sec_path, "ct": ct, "out": out }),
            );
            let sk = read_json::<SecretKeyFile>(&sec_path)?.to_key()?;
            let field = sk.curve.field().clone();
            let ct = read_json::<CiphertextFile>(&ct)?.to_ciphertext(&field, sk.curve.len())?;
            let msg = decrypt(&sk, &ct)?;
            write_json(&out, &MessageFile::new(&field, &msg))?;
        }
        Command::Attack {
            pub_path,
            ct,
            opts,
            transcript_in,
            transcript,
            msg_out,
        } => {
            log_config(
                "attack",
                &serde_json::json!({
                    "pub": pub_path, "ct": ct, "options": opts,
                    "transcript_in": transcript_in, "transcript": transcript, "msg_out": msg_out,
                }),
            );
            let pk = read_json::<PublicKeyFile>(&pub_path)?.to_key()?;
            let pair = match &transcript_in {
                Some(p) => read_json::<TranscriptFile>(p)?.to_pair(&pk)?,
                None => {
                    let tr = attack_pipeline(&pk, &opts.options())?;
                    eprintln!(
                        "recovered m = {}, g = {}, route {:?}, algorithm {}, {} systems",
                        tr.m,
                        tr.g,
                        tr.route,
                        tr.algorithm.number(),
                        tr.lambda
                    );
                    write_json(&transcript, &TranscriptFile::from_transcript(&tr))?;
                    tr.pair
                }
            };
            if let Some(ct) = ct {
                let ct = read_json::<CiphertextFile>(&ct)?.to_ciphertext(pk.field(), pk.len())?;
                let msg = attack_decrypt(&pair, &pk, &ct)?;
                write_json(&msg_out, &MessageFile::new(pk.field(), &msg))?;
            }
        }
        Command::Bench {
            curve,
            m,
            trials,
            ciphertexts,
            seed,
            opts,
            out,
        } => {
            log_config(
                "bench",
                &serde_json::json!({
                    "curve": curve, "m": m, "trials": trials, "ciphertexts": ciphertexts,
                    "seed": seed, "options": opts, "out": out,
                }),
            );
            let csv = bench(&curve, m, trials, ciphertexts, seed, &opts.options())?;
            match out {
                Some(p) => fs::write(&p, csv)
                    .map_err(|e| Failure::new(EXIT_FORMAT, format!("{}: {e}", p.display())))?,
                None => print!("{csv}"),
            }
        }
    }
    Ok(())
}

fn params_table(r: &agmc::params::ParamReport) -> String {
    let mut s = String::new();
    let rows: [(&str, String); 11] = [
        ("q", r.q.to_string()),
        ("g", r.g.to_string()),
        ("n", r.n.to_string()),
        ("m", r.m.to_string()),
        ("k", r.k_pub.to_string()),
        ("d*", r.d_star.to_string()),
        ("t", r.t.to_string()),
        (
            "key size",
            format!("{} bytes ({} KB)", r.key_size_bytes, r.key_size_kb()),
        ),
        ("ISD work factor", format!("2^{:.1}", r.w1_bits)),
        ("attack work factor", format!("2^{:.1}", r.w2_bits)),
        ("systems (algorithm 2)", r.lambda.to_string()),
    ];
    for (k, v) in rows {
        let _ = writeln!(s, "{k:<22} {v}");
    }
    s
}

/// One CSV row per timed stage of each trial.
fn bench(
    curve: &CurveArgs,
    m: usize,
    trials: usize,
    ciphertexts: usize,
    seed: u64,
    opts: &AttackOptions,
) -> Result<String, Failure> {
    let c = curve.build()?;
    let mut csv =
        String::from("trial,seed,q,n,m,g,t,algorithm,lambda,decoded,ciphertexts,stage,seconds\n");
    let mut master = ChaCha20Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let trial_seed: u64 = master.gen();
        let clock = Instant::now();
        let (pk, _) = keygen(&c, m, trial_seed, true)?;
        let keygen_time = clock.elapsed().as_secs_f64();
        let tr = attack_pipeline(&pk, opts)?;
        let mut decoded = 0;
        let clock = Instant::now();
        for i in 0..ciphertexts {
            let msg = random_message(&pk, trial_seed ^ i as u64);
            let ct = encrypt(&pk, &msg, trial_seed.wrapping_add(i as u64), None)?;
            if attack_decrypt(&tr.pair, &pk, &ct).ok().as_ref() == Some(&msg) {
                decoded += 1;
            }
        }
        let per_decode = clock.elapsed().as_secs_f64() / ciphertexts.max(1) as f64;
        let mut stages = vec![("keygen".to_string(), keygen_time)];
        stages.extend(tr.timings.iter().map(|s| (s.stage.clone(), s.seconds)));
        stages.push(("decode".to_string(), per_decode));
        for (stage, secs) in stages {
            let _ = writeln!(
                csv,
                "{trial},{trial_seed},{},{},{},{},{},{},{},{decoded},{ciphertexts},{stage},{secs:.6}",
                pk.field().order(),
                pk.len(),
                tr.m,
                tr.g,
                tr.t,
                tr.algorithm.number(),
                tr.lambda
            );
        }
    }
    Ok(csv)
}
