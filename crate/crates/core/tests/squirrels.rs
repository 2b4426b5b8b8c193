use compverify_core::squirrels::toy::{toy_keygen, toy_sign, ToyConfig, ToySquirrels};
use compverify_core::squirrels::{
    ck_bytes, ckeygen, cverify, pk_bytes, random_vk, verify, vk_bytes, vkeygen, SquirrelsInstance, SquirrelsParams,
    SquirrelsPublicKey, SquirrelsSignature,
};
use compverify_core::Verdict;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

fn configs() -> Vec<ToyConfig> {
    vec![
        ToyConfig::default(),
        ToyConfig { n: 6, entry_bound: 6, q: 32, max_attempts: 1000 },
        ToyConfig { n: 10, entry_bound: 3, q: 16, max_attempts: 1000 },
        ToyConfig { n: 12, entry_bound: 2, q: 8, max_attempts: 1000 },
    ]
}

/// The integer `k′ = (Σ_{i<n} c_i v̄_i − c_n) / Δ` for `v̄_i = v_i + ε_i Δ`.
fn k_prime(toy: &ToySquirrels, c: &[i64], eps: &[bool]) -> i128 {
    let delta = i128::from(toy.secret.delta());
    let n = c.len();
    let v = toy.v_mod_delta();
    let sum: i128 = (0..n - 1)
        .map(|i| i128::from(c[i]) * (i128::from(v[i]) + if eps[i] { delta } else { 0 }))
        .sum::<i128>()
        - i128::from(c[n - 1]);
    assert_eq!(sum % delta, 0, "valid signature must reach the lattice");
    sum / delta
}

#[test]
fn honest_k_prime_within_bounds() {
    let mut rng = ChaCha20Rng::seed_from_u64(40);
    for config in configs() {
        let toy = toy_keygen(&config, &mut rng).unwrap();
        let (lo, hi) = toy.params.k_prime_bounds();
        for i in 0..300u32 {
            let m = i.to_le_bytes();
            let sig = toy_sign(&toy.secret, &m, &toy.params, &mut rng).unwrap();
            let h = compverify_core::hash::hash_to_point(&m, &sig.salt, toy.params.q, toy.params.n);
            let c: Vec<i64> = sig.s.iter().zip(&h).map(|(&s, &h)| i64::from(s) + i64::from(h)).collect();
            for pattern in 0..4 {
                let eps: Vec<bool> = (0..config.n)
                    .map(|_| match pattern {
                        0 => false,
                        1 => true,
                        _ => rng.next_u32() & 1 == 1,
                    })
                    .collect();
                let k = k_prime(&toy, &c, &eps);
                assert!((i128::from(lo)..=i128::from(hi)).contains(&k), "k' = {k} outside [{lo}, {hi}]");
            }
        }
    }
}

#[test]
fn completeness_across_toy_shapes() {
    let mut rng = ChaCha20Rng::seed_from_u64(41);
    for config in configs() {
        let toy = toy_keygen(&config, &mut rng).unwrap();
        for t in 1..=4 {
            let ck = ckeygen(&toy.params, t, &mut rng).unwrap();
            let vk = vkeygen(&ck, &toy.pk, &toy.params).unwrap();
            for i in 0..100u32 {
                let m = i.to_le_bytes();
                let sig = toy_sign(&toy.secret, &m, &toy.params, &mut rng).unwrap();
                assert_eq!(verify(&sig, &m, &toy.pk, &toy.params), Ok(Verdict::Accept));
                assert_eq!(cverify(&sig, &m, &vk, &toy.params), Ok(Verdict::Accept));
                let bytes = sig.to_bytes();
                assert_eq!(SquirrelsSignature::from_bytes(&bytes, toy.params.n).unwrap(), sig);
            }
        }
    }
}

#[test]
fn over_norm_signatures_rejected_by_both() {
    let mut rng = ChaCha20Rng::seed_from_u64(42);
    let toy = toy_keygen(&ToyConfig::default(), &mut rng).unwrap();
    let vk = vkeygen(&ckeygen(&toy.params, 2, &mut rng).unwrap(), &toy.pk, &toy.params).unwrap();
    let mut sig = toy_sign(&toy.secret, b"m", &toy.params, &mut rng).unwrap();
    sig.s[0] = 2000;
    assert!(sig.norm_sq() > toy.params.beta_sq);
    assert_eq!(verify(&sig, b"m", &toy.pk, &toy.params), Ok(Verdict::Reject));
    assert_eq!(cverify(&sig, b"m", &vk, &toy.params), Ok(Verdict::Reject));
}

#[test]
fn named_size_identities() {
    let mut rng = ChaCha20Rng::seed_from_u64(43);
    for inst in SquirrelsInstance::ALL {
        let params = SquirrelsParams::named(inst);
        let (n, s) = (params.n, params.s());
        assert_eq!(SquirrelsPublicKey::random(&params, &mut rng).serialized_len(), pk_bytes(n, s));
        assert_eq!(pk_bytes(n, s), 4 * (n - 1) * s);
        for t in [1, 5, 11] {
            assert_eq!(ckeygen(&params, t, &mut rng).unwrap().serialized_len(), ck_bytes(s, t));
            assert_eq!(random_vk(&params, t, &mut rng).unwrap().serialized_len(), vk_bytes(n, t));
            assert_eq!(vk_bytes(n, t), 4 * (n + 1) * t);
            assert_eq!(ck_bytes(s, t), 4 * (s + 3) * t);
        }
    }
}
