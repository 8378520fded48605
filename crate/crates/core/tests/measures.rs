use qitx_core::measures::{concurrence, discord, mutual_information, Side};
use qitx_core::sampling::{channel_of_rank, conjugate, random_channel, random_local_unitary, random_product_channel};
use qitx_core::states::werner;
use qitx_core::tol;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn product_states_have_no_discord() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..100 {
        let rho = random_product_channel(&mut rng);
        let d = discord(&rho, Side::A).unwrap();
        assert!(d.discord < tol::OPT, "{d:?}");
        assert!(d.discord >= -tol::OPT);
        assert!(d.mutual_information.abs() < 1e-10);
        assert!(concurrence(&rho).unwrap().concurrence < 1e-9);
    }
}

#[test]
fn unentangled_states_with_discord_exist() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let mut found = 0;
    for rank in [3, 4] {
        for _ in 0..6 {
            // Mixtures of product states are separable by construction.
            let rho = channel_of_rank(&mut rng, rank);
            assert!(concurrence(&rho).unwrap().concurrence < 1e-9);
            let d = discord(&rho, Side::A).unwrap();
            assert!(d.discord > tol::OPT, "rank {rank}: {d:?}");
            found += 1;
        }
    }
    assert!(found >= 10);
    for x in [0.01, 0.1, 0.2, 0.3, 1.0 / 3.0] {
        let rho = werner(x).unwrap();
        assert!(concurrence(&rho).unwrap().concurrence < 1e-9);
        assert!(discord(&rho, Side::A).unwrap().discord > tol::OPT, "x = {x}");
    }
}

#[test]
fn full_and_rank_three_channels_are_discordant() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..10 {
        let rho = random_channel(&mut rng);
        assert!(discord(&rho, Side::A).unwrap().discord > tol::OPT);
        assert!(discord(&rho, Side::B).unwrap().discord > tol::OPT);
    }
}

#[test]
fn discord_is_invariant_under_local_unitaries() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..10 {
        let rho = random_channel(&mut rng);
        let u = random_local_unitary(&mut rng);
        let rotated = conjugate(&rho, &u);
        for side in [Side::A, Side::B] {
            let before = discord(&rho, side).unwrap().discord;
            let after = discord(&rotated, side).unwrap().discord;
            assert!((before - after).abs() < 5.0 * tol::OPT, "{before} vs {after}");
        }
        assert!((concurrence(&rho).unwrap().concurrence - concurrence(&rotated).unwrap().concurrence).abs() < 1e-9);
    }
}

#[test]
fn werner_discord_is_monotone() {
    let values: Vec<f64> = (0..=20).map(|i| discord(&werner(i as f64 / 20.0).unwrap(), Side::A).unwrap().discord).collect();
    for w in values.windows(2) {
        assert!(w[1] >= w[0] - tol::OPT, "{values:?}");
    }
}

#[test]
fn werner_golden_values() {
    // Frozen from a 50-digit evaluation of the closed form.
    let golden = [
        (0.05, 0.003_440_199_850_393_604),
        (0.15, 0.028_555_839_766_659_616),
        (0.25, 0.074_193_187_980_817_114),
        (1.0 / 3.0, 0.125_814_583_693_911_42),
        (0.5, 0.262_483_183_763_734_33),
        (1.0, 1.0),
    ];
    for (x, want) in golden {
        let d = discord(&werner(x).unwrap(), Side::A).unwrap();
        assert!((d.discord - want).abs() < 1e-5, "x = {x}: {} vs {want}", d.discord);
        let b = discord(&werner(x).unwrap(), Side::B).unwrap();
        assert!((b.discord - want).abs() < 1e-5);
    }
    let d = discord(&werner(0.2).unwrap(), Side::A).unwrap();
    assert!((d.mutual_information - 0.078_071_905_112_637_652).abs() < 1e-10);
    assert!((d.classical_correlation - 0.029_049_405_545_331_361).abs() < 1e-5);
}

#[test]
fn discord_invariants_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for _ in 0..20 {
        let rho = random_channel(&mut rng);
        let i = mutual_information(&rho).unwrap();
        assert!(i >= -tol::OPT);
        for side in [Side::A, Side::B] {
            let d = discord(&rho, side).unwrap();
            assert!(d.discord >= 0.0 && d.discord <= d.mutual_information + tol::OPT);
            assert!(d.classical_correlation >= 0.0);
            assert!((d.discord + d.classical_correlation - d.mutual_information).abs() < tol::OPT);
            assert!((d.mutual_information - i).abs() < 1e-12);
            let (theta, phi) = d.optimal_measurement;
            assert!(theta.is_finite() && phi.is_finite());
        }
        let c = concurrence(&rho).unwrap();
        assert!((0.0..=1.0).contains(&c.concurrence));
        assert!(c.spin_flip_eigs.windows(2).all(|w| w[0] >= w[1]));
    }
}
