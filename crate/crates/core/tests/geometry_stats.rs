//! Repeated-draw checks of the spatial samplers against their analytic laws.

use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vehicular_coverage::geometry::{
    place_vehicles, sample_plp_disc, sample_ppp_disc, Chord, PlpConfig, StudyDisc,
};

const DRAWS: usize = 10_000;

fn mean_var(counts: &[f64]) -> (f64, f64) {
    let n = counts.len() as f64;
    let mean = counts.iter().sum::<f64>() / n;
    let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

#[test]
fn ppp_count_is_poisson_with_area_mean() {
    let disc = StudyDisc::new(1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let counts: Vec<f64> = (0..DRAWS)
        .map(|_| sample_ppp_disc(4.0, &disc, &mut rng).unwrap().len() as f64)
        .collect();
    let (mean, var) = mean_var(&counts);
    let expected = 4.0 * PI;
    let se = (expected / DRAWS as f64).sqrt();
    assert!((mean - expected).abs() < 3.0 * se, "mean {mean} vs {expected}");
    assert!((var / mean - 1.0).abs() < 0.10, "dispersion {}", var / mean);
}

#[test]
fn ppp_points_are_uniform_on_the_disc() {
    let disc = StudyDisc::new(1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut inner = 0usize;
    let mut total = 0usize;
    for _ in 0..DRAWS {
        for p in sample_ppp_disc(4.0, &disc, &mut rng).unwrap() {
            assert!(p.x * p.x + p.y * p.y <= 1.0 + 1e-9);
            total += 1;
            if p.norm() <= 0.5 {
                inner += 1;
            }
        }
    }
    let frac = inner as f64 / total as f64;
    let se = (0.25 * 0.75 / total as f64).sqrt();
    assert!((frac - 0.25).abs() < 3.0 * se, "inner fraction {frac}");
}

#[test]
fn plp_line_count_matches_strip_measure() {
    let disc = StudyDisc::new(1.0).unwrap();
    let plp = PlpConfig::new(2.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let counts: Vec<f64> = (0..DRAWS)
        .map(|_| sample_plp_disc(&plp, &disc, &mut rng).len() as f64)
        .collect();
    let (mean, _) = mean_var(&counts);
    let expected = 2.0 * PI * 1.0 * 2.0;
    let se = (expected / DRAWS as f64).sqrt();
    assert!((mean - expected).abs() < 3.0 * se, "mean {mean} vs {expected}");
}

#[test]
fn plp_orientation_is_uniform() {
    // chi-square, 10 bins, 9 dof, 1% critical value
    const CRITICAL: f64 = 21.666;
    let disc = StudyDisc::new(1.0).unwrap();
    let plp = PlpConfig::new(2.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut bins = [0usize; 10];
    let mut total = 0usize;
    for _ in 0..DRAWS {
        for c in sample_plp_disc(&plp, &disc, &mut rng) {
            assert!((0.0..PI).contains(&c.theta));
            assert!(c.rho.abs() <= 1.0);
            bins[((c.theta / PI) * 10.0) as usize] += 1;
            total += 1;
        }
    }
    let expected = total as f64 / 10.0;
    let stat: f64 = bins
        .iter()
        .map(|&o| (o as f64 - expected).powi(2) / expected)
        .sum();
    assert!(stat < CRITICAL, "chi-square {stat}");
}

#[test]
fn vehicles_follow_road_length() {
    let disc = StudyDisc::new(1.0).unwrap();
    let long = Chord::from_line(0.2, 0.0, &disc).unwrap();
    let short = Chord::from_line(1.4, 0.75f64.sqrt(), &disc).unwrap();
    assert!((long.length - 2.0).abs() < 1e-12);
    assert!((short.length - 1.0).abs() < 1e-12);

    let n = 30_000;
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let pts = place_vehicles(&[long, short], n, &mut rng).unwrap();
    assert_eq!(pts.len(), n);
    let on = |c: &Chord, x: f64, y: f64| (x * c.theta.cos() + y * c.theta.sin() - c.rho).abs() < 1e-9;
    let mut on_long = 0usize;
    for p in &pts {
        let a = on(&long, p.x, p.y);
        let b = on(&short, p.x, p.y);
        assert!(a || b, "point off both roads");
        if a {
            on_long += 1;
        }
    }
    let frac = on_long as f64 / n as f64;
    let p = 2.0 / 3.0;
    let se = (p * (1.0 - p) / n as f64).sqrt();
    assert!((frac - p).abs() < 3.0 * se, "long-road fraction {frac}");
}

proptest! {
    #[test]
    fn chords_are_consistent(
        chi in 0.05f64..10.0,
        theta in 0.0f64..PI,
        u in -1.0f64..=1.0,
        t in 0.0f64..=1.0,
    ) {
        let disc = StudyDisc::new(chi).unwrap();
        let rho = u * chi;
        let c = Chord::from_line(theta, rho, &disc).unwrap();
        prop_assert!((c.length - 2.0 * (chi * chi - rho * rho).sqrt()).abs() < 1e-9);
        for e in c.endpoints {
            prop_assert!((e.norm() - chi).abs() < 1e-9);
        }
        let p = c.point_at(t).unwrap();
        prop_assert!(disc.contains(p, 1e-9));
        prop_assert!((p.x * theta.cos() + p.y * theta.sin() - rho).abs() < 1e-9);
    }
}
