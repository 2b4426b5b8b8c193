use compverify_core::wave::toy::{default_toy_params, wave_toy_keygen, wave_toy_sign};
use compverify_core::wave::{
    wave_ckeygen, wave_cverify, wave_verify, wave_vk_bytes, wave_vkeygen, TritVec, WaveInstance, WaveParams,
    WaveSignature, WaveVerificationKey,
};
use compverify_core::Verdict;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

#[test]
fn completeness_for_every_sampled_c() {
    let mut rng = ChaCha20Rng::seed_from_u64(50);
    let params = default_toy_params();
    let pk = wave_toy_keygen(&params, &mut rng);
    let mut signed = 0;
    for c in 1..=12 {
        for _ in 0..4 {
            let ck = wave_ckeygen(&params, c, &mut rng).unwrap();
            let vk = wave_vkeygen(&pk, &ck, &params).unwrap();
            for i in 0..25u32 {
                let m = i.to_le_bytes();
                let sig = wave_toy_sign(&pk, &m, &params, 100_000, &mut rng).unwrap();
                assert_eq!(wave_verify(&sig, &m, &pk, &params), Ok(Verdict::Accept));
                assert_eq!(wave_cverify(&sig, &m, &vk, &params), Ok(Verdict::Accept), "c = {c}");
                assert_eq!(WaveSignature::from_bytes(&sig.to_bytes(), params.n).unwrap(), sig);
                signed += 1;
            }
        }
    }
    assert!(signed >= 1000);
}

#[test]
fn other_toy_shapes() {
    let mut rng = ChaCha20Rng::seed_from_u64(51);
    for (n, k) in [(16, 8), (33, 11), (64, 40)] {
        let params = WaveParams::new(n, k, 2 * n / 3).unwrap();
        let pk = wave_toy_keygen(&params, &mut rng);
        let vk = wave_vkeygen(&pk, &wave_ckeygen(&params, 3, &mut rng).unwrap(), &params).unwrap();
        for i in 0..50u32 {
            let sig = wave_toy_sign(&pk, &i.to_le_bytes(), &params, 1_000_000, &mut rng).unwrap();
            assert_eq!(wave_cverify(&sig, &i.to_le_bytes(), &vk, &params), Ok(Verdict::Accept));
        }
    }
}

#[test]
fn named_vk_payload_is_c_times_n_minus_c_trits() {
    let mut rng = ChaCha20Rng::seed_from_u64(52);
    for inst in WaveInstance::ALL {
        let params = WaveParams::named(inst);
        let c = [80, 120, 160][inst as usize];
        let vk = WaveVerificationKey::random(&params, c, &mut rng);
        let stored = vk.stored_rows();
        assert_eq!(stored.rows() * stored.cols(), c * (params.n - c));
        assert_eq!(vk.serialized_len(), wave_vk_bytes(params.n, c));
    }
}

#[test]
fn tampered_signature_caught_by_enough_columns() {
    let mut rng = ChaCha20Rng::seed_from_u64(53);
    let params = default_toy_params();
    let pk = wave_toy_keygen(&params, &mut rng);
    let vk = wave_vkeygen(&pk, &wave_ckeygen(&params, 16, &mut rng).unwrap(), &params).unwrap();
    let sig = wave_toy_sign(&pk, b"m", &params, 100_000, &mut rng).unwrap();
    // Swap a nonzero and a zero trit: weight unchanged, syndrome changed.
    let i = (0..params.n).find(|&i| sig.s.get(i) != 0).unwrap();
    let j = (0..params.n).find(|&j| sig.s.get(j) == 0).unwrap();
    let mut s: TritVec = sig.s.clone();
    s.set(j, s.get(i));
    s.set(i, 0);
    let bad = WaveSignature { salt: sig.salt, s };
    assert_eq!(wave_verify(&bad, b"m", &pk, &params), Ok(Verdict::Reject));
    assert_eq!(wave_cverify(&bad, b"m", &vk, &params), Ok(Verdict::Reject));
}
