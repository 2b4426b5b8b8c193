//! `compverify`: key generation, compression and verification over files.
//!
//! `verify` and `cverify` exit 0 on accept, 1 on reject and 2 on malformed
//! input; every other failure also exits 2.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "compverify", version)]
#[command(about = "Compressed verification for hash-and-sign signatures", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Rw,
    Squirrels,
    Wave,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AdversaryArg {
    Random,
    Replay,
    Scalar,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct MessageArgs {
    /// Message given inline
    #[arg(long)]
    msg: Option<String>,

    /// Read the message from a file
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Print parameters, key sizes and security exponents
    Params {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        /// Named instance; all instances when omitted
        #[arg(long)]
        instance: Option<String>,
        /// Number of secret primes (Squirrels)
        #[arg(long)]
        t: Option<usize>,
        /// Compression dimension (Wave)
        #[arg(long)]
        c: Option<usize>,
        /// Target security exponent, used to pick t or c
        #[arg(long)]
        mu: Option<f64>,
    },

    /// Generate a public key, plus a signing key for toy parameters
    Keygen {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        /// Named instance, `toy`, or the modulus size for rw
        #[arg(long)]
        instance: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Public key output
        #[arg(long)]
        out: PathBuf,
        /// Signing key output
        #[arg(long)]
        sk_out: Option<PathBuf>,
    },

    /// Draw a secret compression key for a public key
    CkGen {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        c: Option<usize>,
        /// Target security exponent; for rw, the bit width of the secret prime
        #[arg(long)]
        mu: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },

    /// Compress a public key into a verification key
    VkGen {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        ck: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },

    /// Sign with a toy signing key
    SignToy {
        #[arg(long)]
        sk: PathBuf,
        #[command(flatten)]
        message: MessageArgs,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },

    /// Verify against the public key
    Verify {
        #[arg(long)]
        pk: PathBuf,
        #[arg(long)]
        sig: PathBuf,
        #[command(flatten)]
        message: MessageArgs,
    },

    /// Verify against the verification key
    Cverify {
        #[arg(long)]
        vk: PathBuf,
        #[arg(long)]
        sig: PathBuf,
        #[command(flatten)]
        message: MessageArgs,
    },

    /// Count word operations of verify and cverify on random keys
    BenchOps {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long)]
        instance: Option<String>,
        #[arg(long)]
        t: Option<usize>,
        #[arg(long)]
        c: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },

    /// Play the kernel-guessing game against fresh secrets
    SimulateForgery {
        #[arg(long, value_enum)]
        scheme: SchemeArg,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        #[arg(long, default_value_t = 4)]
        queries: u64,
        /// Syndrome length n − k (wave)
        #[arg(long, default_value_t = 4)]
        m: usize,
        /// Kernel codimension (wave)
        #[arg(long, default_value_t = 2)]
        c: usize,
        /// Secret prime width (squirrels)
        #[arg(long, default_value_t = 12)]
        bits: u32,
        #[arg(long, value_enum, default_value_t = AdversaryArg::Random)]
        adversary: AdversaryArg,
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Params { scheme, instance, t, c, mu } => commands::params(scheme, instance.as_deref(), t, c, mu),
        Command::Keygen { scheme, instance, seed, out, sk_out } => {
            commands::keygen(scheme, instance.as_deref(), seed, &out, sk_out.as_deref())
        }
        Command::CkGen { pk, t, c, mu, seed, out } => commands::ck_gen(&pk, t, c, mu, seed, &out),
        Command::VkGen { pk, ck, out } => commands::vk_gen(&pk, &ck, &out),
        Command::SignToy { sk, message, seed, out } => commands::sign_toy(&sk, &message, seed, &out),
        Command::Verify { pk, sig, message } => commands::verify(&pk, &sig, &message),
        Command::Cverify { vk, sig, message } => commands::cverify(&vk, &sig, &message),
        Command::BenchOps { scheme, instance, t, c, seed } => {
            commands::bench_ops(scheme, instance.as_deref(), t, c, seed)
        }
        Command::SimulateForgery { scheme, trials, queries, m, c, bits, adversary, seed } => {
            commands::simulate_forgery(scheme, trials, queries, m, c, bits, adversary, seed)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
