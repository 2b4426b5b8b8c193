use std::error::Error;
use std::fs;
use std::path::Path;
use std::process::ExitCode;

use compverify::format::write_file;
use compverify::{KeyMaterial, Signature};
use compverify_core::rw::{rw_ckeygen, rw_cverify, rw_forgery_bound, rw_keygen, rw_sign, rw_verify, rw_vkeygen};
use compverify_core::security::{simulate_segp_game, squirrels_budget, wave_budget, Adversary, KappaModel, ToyGame};
use compverify_core::squirrels::toy::{toy_keygen, toy_sign, ToyConfig};
use compverify_core::squirrels::{
    ck_bytes, ckeygen, cverify_tallied, random_vk, secret_primes_mu, verify_tallied, vk_bytes, vkeygen, choose_t,
    SquirrelsInstance, SquirrelsParams, SquirrelsPublicKey, SquirrelsSignature,
};
use compverify_core::tally::OpTally;
use compverify_core::wave::toy::{default_toy_params, wave_toy_keygen, wave_toy_sign};
use compverify_core::wave::{
    wave_choose_c, wave_ckeygen, wave_cverify_tallied, wave_mu, wave_verify_tallied, wave_vk_bytes, wave_vkeygen,
    TritVec, WaveInstance, WaveParams, WavePublicKey, WaveSignature, WaveVerificationKey,
};
use compverify_core::Verdict;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::{AdversaryArg, MessageArgs, SchemeArg};

type CmdResult = Result<ExitCode, Box<dyn Error>>;

const DEFAULT_RW_BITS: u32 = 512;
const TOY_SQUIRRELS_T: usize = 2;
const TOY_WAVE_C: usize = 8;
const Q_LIMIT: f64 = 18_446_744_073_709_551_616.0;

fn rng(seed: Option<u64>) -> ChaCha20Rng {
    match seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_os_rng(),
    }
}

fn is_toy(instance: Option<&str>) -> bool {
    instance.is_none_or(|s| s.eq_ignore_ascii_case("toy"))
}

fn squirrels_instance(name: &str) -> Result<SquirrelsInstance, Box<dyn Error>> {
    SquirrelsInstance::parse(name).ok_or_else(|| format!("unknown Squirrels instance `{name}`").into())
}

fn wave_instance(name: &str) -> Result<WaveInstance, Box<dyn Error>> {
    WaveInstance::parse(name).ok_or_else(|| format!("unknown Wave instance `{name}`").into())
}

fn read_key(path: &Path) -> Result<KeyMaterial, Box<dyn Error>> {
    let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    KeyMaterial::from_file(&bytes).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn write_key(path: &Path, key: &KeyMaterial) -> Result<(), Box<dyn Error>> {
    write_file(path, &key.to_file(), key.kind().is_private())?;
    Ok(())
}

fn message(args: &MessageArgs) -> Result<Vec<u8>, Box<dyn Error>> {
    match (&args.msg, &args.input) {
        (Some(m), _) => Ok(m.as_bytes().to_vec()),
        (None, Some(path)) => Ok(fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?),
        (None, None) => Err("no message given".into()),
    }
}

fn verdict_exit(v: Verdict) -> ExitCode {
    match v {
        Verdict::Accept => {
            println!("accept");
            ExitCode::SUCCESS
        }
        Verdict::Reject => {
            println!("reject");
            ExitCode::from(1)
        }
    }
}

fn squirrels_t(inst: Option<SquirrelsInstance>, t: Option<usize>, mu: Option<f64>) -> usize {
    match (t, mu, inst) {
        (Some(t), _, _) => t,
        (None, Some(mu), _) => choose_t(mu).0,
        (None, None, Some(i)) => choose_t(f64::from(i.table().lambda)).0,
        (None, None, None) => TOY_SQUIRRELS_T,
    }
}

fn wave_c(inst: Option<WaveInstance>, c: Option<usize>, mu: Option<f64>) -> usize {
    match (c, mu, inst) {
        (Some(c), _, _) => c,
        (None, Some(mu), _) => wave_choose_c(mu).0,
        (None, None, Some(i)) => wave_choose_c(f64::from(i.table().lambda)).0,
        (None, None, None) => TOY_WAVE_C,
    }
}

pub fn params(scheme: SchemeArg, instance: Option<&str>, t: Option<usize>, c: Option<usize>, mu: Option<f64>) -> CmdResult {
    match scheme {
        SchemeArg::Squirrels => {
            let list = match instance {
                Some(name) => vec![squirrels_instance(name)?],
                None => SquirrelsInstance::ALL.to_vec(),
            };
            println!(
                "{:<14} {:>4} {:>5} {:>4} {:>3} {:>6} {:>9} {:>6} {:>6} {:>7} {:>8} {:>9}",
                "instance", "lam", "n", "s", "t", "mu", "|PK|", "|CK|", "|VK|", "PK:VK", "k'min", "k'max"
            );
            for inst in list {
                let params = SquirrelsParams::named(inst);
                let t = squirrels_t(Some(inst), t, mu);
                let (lo, hi) = params.k_prime_bounds();
                let (n, s) = (params.n, params.s());
                println!(
                    "{:<14} {:>4} {:>5} {:>4} {:>3} {:>6.1} {:>9} {:>6} {:>6} {:>7.2} {:>8} {:>9}",
                    format!("Squirrels-{}", inst.name()),
                    inst.table().lambda,
                    n,
                    s,
                    t,
                    secret_primes_mu(t),
                    params.pk_bytes(),
                    ck_bytes(s, t),
                    vk_bytes(n, t),
                    params.pk_bytes() as f64 / vk_bytes(n, t) as f64,
                    lo,
                    hi
                );
                if let Ok(b) = squirrels_budget(s, t, Q_LIMIT, KappaModel::Binomial) {
                    println!("    bound at Q = 2^64 (kappa = C(s, t)): 2^{:.1}", b.success_bound_log2(Q_LIMIT)?);
                }
            }
        }
        SchemeArg::Wave => {
            let list = match instance {
                Some(name) => vec![wave_instance(name)?],
                None => WaveInstance::ALL.to_vec(),
            };
            println!(
                "{:<10} {:>4} {:>6} {:>5} {:>6} {:>4} {:>6} {:>9} {:>7} {:>7}",
                "instance", "lam", "n", "k", "w", "c", "mu", "|PK|", "|VK|", "PK:VK"
            );
            for inst in list {
                let p = WaveParams::named(inst);
                let c = wave_c(Some(inst), c, mu);
                let vk = wave_vk_bytes(p.n, c);
                println!(
                    "{:<10} {:>4} {:>6} {:>5} {:>6} {:>4} {:>6.1} {:>9} {:>7} {:>7.2}",
                    inst.name(),
                    inst.table().lambda,
                    p.n,
                    p.k,
                    p.w,
                    c,
                    wave_mu(c),
                    p.pk_bytes(),
                    vk,
                    p.pk_bytes() as f64 / vk as f64
                );
                if let Ok(b) = wave_budget(p.n, p.k, c, Q_LIMIT) {
                    println!("    bound at Q = 2^64: 2^{:.1}", b.success_bound_log2(Q_LIMIT)?);
                }
            }
        }
        SchemeArg::Rw => {
            let bits = match instance {
                Some(s) => s.trim_start_matches("rw-").parse::<u32>()?,
                None => 2048,
            };
            let width = mu.map_or(31, |m| m.round() as u32);
            let bound = rw_forgery_bound(bits, width, 1.0)?;
            println!("modulus bits {bits}, secret prime bits {width}");
            println!("forgery bound per attempt 2^{:.1}", bound.log2());
        }
    }
    Ok(ExitCode::SUCCESS)
}

pub fn keygen(
    scheme: SchemeArg,
    instance: Option<&str>,
    seed: Option<u64>,
    out: &Path,
    sk_out: Option<&Path>,
) -> CmdResult {
    let mut rng = rng(seed);
    let (pk, sk) = match scheme {
        SchemeArg::Rw => {
            let bits = match instance {
                Some(s) => s.trim_start_matches("rw-").parse::<u32>()?,
                None => DEFAULT_RW_BITS,
            };
            let sk = rw_keygen(bits, &mut rng)?;
            (KeyMaterial::RwPublic { n: sk.modulus().clone() }, Some(KeyMaterial::RwSecret(sk)))
        }
        SchemeArg::Squirrels if is_toy(instance) => {
            let toy = toy_keygen(&ToyConfig::default(), &mut rng)?;
            (
                KeyMaterial::SquirrelsPublic(toy.params.clone(), toy.pk),
                Some(KeyMaterial::SquirrelsSecret(toy.params, toy.secret)),
            )
        }
        SchemeArg::Squirrels => {
            let params = SquirrelsParams::named(squirrels_instance(instance.expect("named"))?);
            let pk = SquirrelsPublicKey::random(&params, &mut rng);
            (KeyMaterial::SquirrelsPublic(params, pk), None)
        }
        SchemeArg::Wave => {
            let params = if is_toy(instance) {
                default_toy_params()
            } else {
                WaveParams::named(wave_instance(instance.expect("named"))?)
            };
            let pk = wave_toy_keygen(&params, &mut rng);
            let sk = is_toy(instance).then(|| KeyMaterial::WaveSecret(params, pk.clone()));
            (KeyMaterial::WavePublic(params, pk), sk)
        }
    };
    write_key(out, &pk)?;
    println!("wrote public key to {}", out.display());
    match (sk_out, sk) {
        (Some(path), Some(sk)) => {
            write_key(path, &sk)?;
            println!("wrote signing key to {}", path.display());
        }
        (Some(_), None) => return Err("named lattice and code instances have no signing key here".into()),
        (None, _) => {}
    }
    Ok(ExitCode::SUCCESS)
}

pub fn ck_gen(pk: &Path, t: Option<usize>, c: Option<usize>, mu: Option<f64>, seed: Option<u64>, out: &Path) -> CmdResult {
    let mut rng = rng(seed);
    let ck = match read_key(pk)? {
        KeyMaterial::RwPublic { .. } => {
            let width = mu.map_or(31, |m| m.round() as u32);
            KeyMaterial::RwCompression(rw_ckeygen(width, &mut rng)?)
        }
        KeyMaterial::SquirrelsPublic(params, _) => {
            let t = squirrels_t(params.instance, t, mu);
            let ck = ckeygen(&params, t, &mut rng)?;
            println!("t = {t}, mu = {:.1}", secret_primes_mu(t));
            KeyMaterial::SquirrelsCompression(params, ck)
        }
        KeyMaterial::WavePublic(params, _) => {
            let c = wave_c(params.instance, c, mu);
            let ck = wave_ckeygen(&params, c, &mut rng)?;
            println!("c = {c}, mu = {:.1}", wave_mu(c));
            KeyMaterial::WaveCompression(params, ck)
        }
        other => return Err(format!("expected a public key, found a {}", other.kind().name()).into()),
    };
    write_key(out, &ck)?;
    println!("wrote compression key to {}", out.display());
    Ok(ExitCode::SUCCESS)
}

pub fn vk_gen(pk: &Path, ck: &Path, out: &Path) -> CmdResult {
    let vk = match (read_key(pk)?, read_key(ck)?) {
        (KeyMaterial::RwPublic { n }, KeyMaterial::RwCompression(ell)) => KeyMaterial::RwVerification(rw_vkeygen(ell, &n)),
        (KeyMaterial::SquirrelsPublic(params, pk), KeyMaterial::SquirrelsCompression(ck_params, ck)) => {
            if params != ck_params {
                return Err("public and compression keys use different parameters".into());
            }
            KeyMaterial::SquirrelsVerification(params.clone(), vkeygen(&ck, &pk, &params)?)
        }
        (KeyMaterial::WavePublic(params, pk), KeyMaterial::WaveCompression(ck_params, ck)) => {
            if params != ck_params {
                return Err("public and compression keys use different parameters".into());
            }
            KeyMaterial::WaveVerification(params, wave_vkeygen(&pk, &ck, &params)?)
        }
        (a, b) => {
            return Err(format!(
                "need a public and a compression key of one scheme, got {} {} and {} {}",
                a.scheme().name(),
                a.kind().name(),
                b.scheme().name(),
                b.kind().name()
            )
            .into())
        }
    };
    write_key(out, &vk)?;
    println!("wrote verification key to {}", out.display());
    Ok(ExitCode::SUCCESS)
}

pub fn sign_toy(sk: &Path, msg: &MessageArgs, seed: Option<u64>, out: &Path) -> CmdResult {
    let mut rng = rng(seed);
    let m = message(msg)?;
    let key = read_key(sk)?;
    let sig = match &key {
        KeyMaterial::RwSecret(sk) => Signature::Rw(rw_sign(sk, &m, &mut rng)),
        KeyMaterial::SquirrelsSecret(params, secret) => Signature::Squirrels(toy_sign(secret, &m, params, &mut rng)?),
        KeyMaterial::WaveSecret(params, pk) => Signature::Wave(wave_toy_sign(pk, &m, params, 1_000_000, &mut rng)?),
        other => return Err(format!("expected a signing key, found a {}", other.kind().name()).into()),
    };
    write_file(out, &sig.to_file(&key), false)?;
    println!("wrote signature to {}", out.display());
    Ok(ExitCode::SUCCESS)
}

pub fn verify(pk: &Path, sig: &Path, msg: &MessageArgs) -> CmdResult {
    let key = read_key(pk)?;
    let m = message(msg)?;
    let sig = Signature::from_file(&fs::read(sig)?, &key)?;
    let verdict = match (&key, &sig) {
        (KeyMaterial::RwPublic { n }, Signature::Rw(s)) => rw_verify(s, &m, n)?,
        (KeyMaterial::SquirrelsPublic(params, pk), Signature::Squirrels(s)) => {
            verify_tallied(s, &m, pk, params, &mut OpTally::default())?
        }
        (KeyMaterial::WavePublic(params, pk), Signature::Wave(s)) => {
            wave_verify_tallied(s, &m, pk, params, &mut OpTally::default())?
        }
        _ => return Err(format!("expected a public key, found a {}", key.kind().name()).into()),
    };
    Ok(verdict_exit(verdict))
}

pub fn cverify(vk: &Path, sig: &Path, msg: &MessageArgs) -> CmdResult {
    let key = read_key(vk)?;
    let m = message(msg)?;
    let sig = Signature::from_file(&fs::read(sig)?, &key)?;
    let verdict = match (&key, &sig) {
        (KeyMaterial::RwVerification(vk), Signature::Rw(s)) => rw_cverify(s, &m, vk)?,
        (KeyMaterial::SquirrelsVerification(params, vk), Signature::Squirrels(s)) => {
            cverify_tallied(s, &m, vk, params, &mut OpTally::default())?
        }
        (KeyMaterial::WaveVerification(params, vk), Signature::Wave(s)) => {
            wave_cverify_tallied(s, &m, vk, params, &mut OpTally::default())?
        }
        _ => return Err(format!("expected a verification key, found a {}", key.kind().name()).into()),
    };
    Ok(verdict_exit(verdict))
}

fn print_tallies(label: &str, full: &OpTally, comp: &OpTally, target_name: &str, target: f64) {
    println!(
        "{label:<14} verify mul {:>12} red {:>12} | cverify mul {:>9} red {:>9} | ratio {:>7.2} ({target_name} = {target:.2})",
        full.mul,
        full.reduce,
        comp.mul,
        comp.reduce,
        full.ratio_over(comp)
    );
}

pub fn bench_ops(scheme: SchemeArg, instance: Option<&str>, t: Option<usize>, c: Option<usize>, seed: Option<u64>) -> CmdResult {
    let mut rng = rng(seed);
    match scheme {
        SchemeArg::Squirrels => {
            let list = match instance {
                Some(name) => vec![squirrels_instance(name)?],
                None => SquirrelsInstance::ALL.to_vec(),
            };
            for inst in list {
                let params = SquirrelsParams::named(inst);
                let t = squirrels_t(Some(inst), t, None);
                let pk = SquirrelsPublicKey::random(&params, &mut rng);
                let vk = random_vk(&params, t, &mut rng)?;
                let mut salt = [0u8; 16];
                rng.fill_bytes(&mut salt);
                // Any in-bound signature runs the full congruence phase.
                let sig = SquirrelsSignature { salt, s: vec![0; params.n] };
                let (mut full, mut comp) = (OpTally::default(), OpTally::default());
                verify_tallied(&sig, b"bench", &pk, &params, &mut full)?;
                cverify_tallied(&sig, b"bench", &vk, &params, &mut comp)?;
                let target = params.s() as f64 / (t + 1) as f64;
                print_tallies(&format!("Squirrels-{}", inst.name()), &full, &comp, "s/(t+1)", target);
            }
        }
        SchemeArg::Wave => {
            let list = match instance {
                Some(name) => vec![wave_instance(name)?],
                None => WaveInstance::ALL.to_vec(),
            };
            for inst in list {
                let params = WaveParams::named(inst);
                let c = wave_c(Some(inst), c, None);
                let pk = WavePublicKey::random(&params, &mut rng);
                let vk = WaveVerificationKey::random(&params, c, &mut rng);
                let mut s = TritVec::zeros(params.n);
                for i in 0..params.w {
                    s.set(i, 1 + (rng.next_u32() & 1) as u8);
                }
                let mut salt = [0u8; 16];
                rng.fill_bytes(&mut salt);
                let sig = WaveSignature { salt, s };
                let (mut full, mut comp) = (OpTally::default(), OpTally::default());
                wave_verify_tallied(&sig, b"bench", &pk, &params, &mut full)?;
                wave_cverify_tallied(&sig, b"bench", &vk, &params, &mut comp)?;
                print_tallies(inst.name(), &full, &comp, "(n-k)/2c", params.m() as f64 / (2 * c) as f64);
            }
        }
        SchemeArg::Rw => return Err("bench-ops covers squirrels and wave".into()),
    }
    Ok(ExitCode::SUCCESS)
}

#[allow(clippy::too_many_arguments)]
pub fn simulate_forgery(
    scheme: SchemeArg,
    trials: u64,
    queries: u64,
    m: usize,
    c: usize,
    bits: u32,
    adversary: AdversaryArg,
    seed: Option<u64>,
) -> CmdResult {
    let mut rng = rng(seed);
    let game = match scheme {
        SchemeArg::Wave => ToyGame::Wave { m, c },
        SchemeArg::Squirrels => ToyGame::Squirrels { bits, max_query: 1 << 20 },
        SchemeArg::Rw => return Err("simulate-forgery covers squirrels and wave".into()),
    };
    let adversary = match adversary {
        AdversaryArg::Random => Adversary::RandomQuery,
        AdversaryArg::Replay => Adversary::ReplayRejected,
        AdversaryArg::Scalar => Adversary::ScalarMultiple,
    };
    let report = simulate_segp_game(game, adversary, queries, trials, &mut rng)?;
    println!("game {game:?}, adversary {adversary:?}, {queries} queries, {trials} trials");
    println!("success rate {:.5} (late {:.5}), bound {:.5}", report.rate(), report.late_rate(), report.bound);
    println!("within bound: {}", if report.within_bound() { "yes" } else { "no" });
    Ok(ExitCode::SUCCESS)
}
