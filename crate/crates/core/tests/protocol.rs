use qitx_core::linalg::{self, kron};
use qitx_core::protocol::{
    bell_state, centered_spectrum, coefficient_matrix, collapse, denominator, rank_classify, reconstruct,
    s_vector_analytic, transmit, BellOutcome, OutcomeStatus,
};
use qitx_core::sampling::{channel_of_rank, random_channel, random_mixed_bloch, random_product_channel};
use qitx_core::states::{correlation_from_channel, is_security_form, werner, DensityState, PauliVector};
use qitx_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn max_diff(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    (0..3).map(|k| (a[k] - b[k]).abs()).fold(0.0, f64::max)
}

#[test]
fn bell_states_are_orthonormal() {
    for a in BellOutcome::ALL {
        for b in BellOutcome::ALL {
            let overlap = bell_state(a).matrix().trace_product(bell_state(b).matrix()).re;
            let want = if a == b { 1.0 } else { 0.0 };
            assert!((overlap - want).abs() < 1e-15);
        }
    }
}

#[test]
fn analytic_collapse_matches_projection() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..200 {
        let channel = random_channel(&mut rng);
        let r = correlation_from_channel(&channel).unwrap();
        let c = random_mixed_bloch(&mut rng);
        for outcome in BellOutcome::ALL {
            let col = collapse(&c.to_state(), &channel, outcome).unwrap();
            let s = s_vector_analytic(&r, &c, outcome).unwrap();
            assert!(max_diff(&s, &col.s) < 1e-10);
            assert!((denominator(&r, &c, outcome) / 4.0 - col.probability).abs() < 1e-12);
        }
    }
}

#[test]
fn werner_collapse_is_scaled_input() {
    for x in [0.05, 0.25, 0.5, 1.0] {
        let channel = werner(x).unwrap();
        let c = PauliVector::new(0.3, -0.5, 0.6).unwrap();
        let col = collapse(&c.to_state(), &channel, BellOutcome::new(0, 0).unwrap()).unwrap();
        assert!(max_diff(&col.s, &[0.3 * x, -0.5 * x, 0.6 * x]) < 1e-12);
    }
}

#[test]
fn full_rank_channels_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..100 {
        let channel = random_channel(&mut rng);
        let c = random_mixed_bloch(&mut rng);
        let rec = transmit(&c.to_state(), &channel).unwrap();
        assert_eq!(rec.rank.rank, 4);
        assert!(rec.all_reconstructed());
        assert!(rec.max_error().unwrap() < 1e-8);
        assert!((rec.probability_sum() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn determinant_identity_uses_full_correlation_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..50 {
        let channel = random_channel(&mut rng);
        let r = correlation_from_channel(&channel).unwrap();
        let det_r = r.det();
        for _ in 0..20 {
            let c = random_mixed_bloch(&mut rng);
            for outcome in BellOutcome::ALL {
                let s = s_vector_analytic(&r, &c, outcome).unwrap();
                let value = denominator(&r, &c, outcome) * linalg::det(&coefficient_matrix(&r, &s, outcome));
                assert!((value + det_r).abs() <= 1e-10 * det_r.abs().max(1e-3));
            }
        }
    }
}

#[test]
fn security_form_gives_equal_probabilities() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for i in 0..=10 {
        let channel = werner(i as f64 / 10.0).unwrap();
        assert!(is_security_form(&channel).unwrap());
        for _ in 0..20 {
            let c = random_mixed_bloch(&mut rng).to_state();
            for outcome in BellOutcome::ALL {
                assert!((collapse(&c, &channel, outcome).unwrap().probability - 0.25).abs() < 1e-12);
            }
        }
    }
    let biased = DensityState::new(
        kron(PauliVector::new(0.0, 0.0, 0.8).unwrap().to_state().matrix(), PauliVector::maximally_mixed().to_state().matrix())
            .unwrap(),
    )
    .unwrap();
    assert!(!is_security_form(&biased).unwrap());
    let c = PauliVector::new(0.0, 0.0, 0.9).unwrap().to_state();
    let probs: Vec<f64> = BellOutcome::ALL.iter().map(|&o| collapse(&c, &biased, o).unwrap().probability).collect();
    assert!(probs.iter().any(|p| (p - 0.25).abs() > 0.1));
}

#[test]
fn collapse_clouds_have_rank_minus_one_dimensions() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for rank in 1..=4 {
        let channel = channel_of_rank(&mut rng, rank);
        let r = correlation_from_channel(&channel).unwrap();
        assert_eq!(rank_classify(&r).rank, rank);
        let outcome = BellOutcome::new(0, 1).unwrap();
        let cloud: Vec<[f64; 3]> = (0..300)
            .filter_map(|_| collapse(&random_mixed_bloch(&mut rng).to_state(), &channel, outcome).ok())
            .map(|col| col.s)
            .collect();
        let spectrum = centered_spectrum(&cloud);
        let above = spectrum.iter().filter(|&&v| v > 1e-8).count();
        assert_eq!(above, rank - 1, "rank {rank}: {spectrum:?}");
    }
}

#[test]
fn rank_deficient_channels_degrade_with_a_report() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let product = random_product_channel(&mut rng);
    let rec = transmit(&random_mixed_bloch(&mut rng).to_state(), &product).unwrap();
    assert_eq!(rec.rank.rank, 1);
    for o in &rec.outcomes {
        assert!(matches!(o.status, OutcomeStatus::RankDeficient(_)), "{:?}", o.status);
    }

    let rank3 = channel_of_rank(&mut rng, 3);
    let r = correlation_from_channel(&rank3).unwrap();
    let c = random_mixed_bloch(&mut rng);
    let outcome = BellOutcome::new(1, 1).unwrap();
    let s = s_vector_analytic(&r, &c, outcome).unwrap();
    match reconstruct(&r, &s, outcome) {
        Err(Error::RankDeficient(d)) => {
            assert_eq!(d.rank.rank, 3);
            let ls = d.least_squares.unwrap();
            // The true input lies on the solution line through the LS point.
            let t = coefficient_matrix(&r, &s, outcome);
            let rhs: [f64; 3] = std::array::from_fn(|k| s[k] - r.get(0, k + 1));
            let residual = linalg::mat_vec(&t, &ls);
            assert!(max_diff(&residual, &rhs) < 1e-9);
            for cand in &d.pure_candidates {
                let n: f64 = cand.iter().map(|x| x * x).sum::<f64>().sqrt();
                assert!((n - 1.0).abs() < 1e-9);
            }
        }
        other => panic!("expected rank deficiency, got {other:?}"),
    }
}

#[test]
fn pseudo_mixture_rebuilds_channels() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    let mut saw_negative = false;
    for _ in 0..50 {
        let channel = random_channel(&mut rng);
        let r = correlation_from_channel(&channel).unwrap();
        let mix = rank_classify(&r).mixture;
        let back = mix.rebuild();
        for i in 0..4 {
            for j in 0..4 {
                assert!((back[i][j] - r.get(i, j)).abs() < 1e-10);
            }
        }
        assert!((mix.weight_sum() - 1.0).abs() < 1e-10);
        let dense = mix.rebuild_density();
        assert!(dense.max_abs_diff(channel.matrix()) < 1e-10);
        saw_negative |= mix.terms.iter().any(|t| t.weight < -1e-9);
    }
    assert!(saw_negative, "random channels should show negative pseudo-mixture weights");
    let w = rank_classify(&correlation_from_channel(&werner(0.5).unwrap()).unwrap());
    assert_eq!(w.rank, 4);
    assert!(w.mixture.rebuild_density().max_abs_diff(werner(0.5).unwrap().matrix()) < 1e-12);
}
