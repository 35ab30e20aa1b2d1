use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::metric::{DistanceCache, Graph};

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/census")
}

fn scratch_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("quadmap-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn config_parsing() {
    let cfg = ExperimentConfig::parse(
        "# scaling run\nkind = stars\nn = 2^4..2^6, 100\nreplicas = 3\neps = 0.1, 0.2 # two values\nseed = 7\nout = \"x.csv\"\n",
    )
    .unwrap();
    assert_eq!(cfg.kind, ExperimentKind::Stars);
    assert_eq!(cfg.n, vec![16, 32, 64, 100]);
    assert_eq!(cfg.replicas, 3);
    assert_eq!(cfg.eps, vec![0.1, 0.2]);
    assert_eq!(cfg.seed, 7);
    assert_eq!(cfg.out, Some(PathBuf::from("x.csv")));
    assert_eq!(cfg.threads, 1);
}

#[test]
fn config_errors() {
    assert!(matches!(ExperimentConfig::parse("colour = red"), Err(ConfigError::UnknownKey(_))));
    assert!(matches!(ExperimentConfig::parse("n"), Err(ConfigError::Syntax { line: 1 })));
    assert!(matches!(ExperimentConfig::parse("n = "), Err(ConfigError::EmptyGrid("n"))));
    assert!(matches!(ExperimentConfig::parse("replicas = 0"), Err(ConfigError::OutOfRange { .. })));
    assert!(matches!(ExperimentConfig::parse("eps = 0.1,x"), Err(ConfigError::BadValue { .. })));
    assert!(matches!(ExperimentConfig::parse("n = 3..8"), Err(ConfigError::BadValue { .. })));
    assert!(matches!(ExperimentConfig::parse("kind = plot"), Err(ConfigError::BadValue { .. })));
    assert!(matches!(ExperimentConfig::parse("max_quad_n = 9"), Err(ConfigError::OutOfRange { .. })));
}

#[test]
fn replica_streams_differ_and_repeat() {
    let a: u64 = replica_rng(1, 10, 0).gen();
    let b: u64 = replica_rng(1, 10, 1).gen();
    let c: u64 = replica_rng(1, 11, 0).gen();
    assert_ne!(a, b);
    assert_ne!(a, c);
    assert_eq!(a, replica_rng(1, 10, 0).gen::<u64>());
}

#[test]
fn wilson_interval_values() {
    let (lo, hi) = wilson_interval(0, 10);
    assert_eq!(lo, 0.0);
    assert!((hi - 0.2775).abs() < 1e-4);
    let (lo, hi) = wilson_interval(50, 100);
    assert!((lo - 0.4038).abs() < 1e-4 && (hi - 0.5962).abs() < 1e-4);
    for hits in 0..=20 {
        let (lo, hi) = wilson_interval(hits, 20);
        let p = hits as f64 / 20.0;
        assert!(lo <= p && p <= hi);
    }
}

#[test]
fn scaling_rows_match_bfs() {
    let mut cfg = ExperimentConfig::for_kind(ExperimentKind::Scaling);
    cfg.n = vec![5, 40];
    cfg.replicas = 6;
    for r in scaling_records(&cfg).unwrap() {
        let pq = crate::cvs::sample_quadrangulation(r.n, &mut replica_rng(cfg.seed, r.n, r.replica));
        let g = Graph::from_map(pq.q.map());
        let d = g.bfs(r.v1).dist;
        assert_eq!(d[r.v2], r.distance);
        let mean = d.iter().map(|&x| x as f64).sum::<f64>() / d.len() as f64;
        assert!((mean - r.mean_distance).abs() < 1e-9);
    }
    let csv = run_scaling(&cfg).unwrap();
    assert!(csv.starts_with(SCALING_HEADER));
    assert_eq!(csv.lines().count(), 13);
    assert!(csv.lines().all(|l| l.split(',').count() == 8));
    assert!(!csv.contains('\r'));
}

#[test]
fn outputs_do_not_depend_on_threads() {
    let mut cfg = ExperimentConfig::for_kind(ExperimentKind::Scaling);
    cfg.n = vec![30, 60];
    cfg.replicas = 9;
    cfg.eps = vec![0.2, 0.5];
    cfg.tuples = 3;
    cfg.seed = 99;
    let one = (run_scaling(&cfg).unwrap(), run_star_events(&cfg).unwrap(), run_covering(&cfg).unwrap());
    for threads in [2, 3, 8] {
        cfg.threads = threads;
        let again = (run_scaling(&cfg).unwrap(), run_star_events(&cfg).unwrap(), run_covering(&cfg).unwrap());
        assert_eq!(one, again, "threads = {threads}");
    }
    cfg.seed = 100;
    cfg.threads = 1;
    assert_ne!(one.0, run_scaling(&cfg).unwrap());
}

#[test]
fn star_events_vanish_for_large_eps() {
    let mut cfg = ExperimentConfig::for_kind(ExperimentKind::Stars);
    cfg.n = vec![50];
    cfg.replicas = 5;
    cfg.tuples = 4;
    cfg.eps = vec![0.3, 10.0];
    cfg.beta = vec![0.2, 0.5];
    let recs = star_records(&cfg).unwrap();
    assert_eq!(recs.len(), 5 * 2 * 2);
    for r in &recs {
        if r.eps == 10.0 {
            assert_eq!((r.a1_hits, r.a2_hits), (0, 0));
        }
    }
    let sum = summarize_stars(&recs);
    assert_eq!(sum.len(), 4);
    assert!(sum.iter().all(|s| s.trials == 20));
    let csv = run_star_events(&cfg).unwrap();
    assert!(csv.starts_with(STAR_SUMMARY_HEADER));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn star_counts_match_direct_evaluation() {
    let mut cfg = ExperimentConfig::for_kind(ExperimentKind::Stars);
    cfg.n = vec![200];
    cfg.replicas = 3;
    cfg.tuples = 5;
    cfg.eps = vec![0.15, 0.3];
    cfg.beta = vec![0.5];
    let recs = star_records(&cfg).unwrap();
    for replica in 0..3 {
        let mut rng = replica_rng(cfg.seed, 200, replica);
        let pq = crate::cvs::sample_quadrangulation(200, &mut rng);
        let g = Graph::from_map(pq.q.map());
        let mut a2 = [0usize; 2];
        let mut a1 = [0usize; 2];
        for _ in 0..5 {
            let v: [usize; 4] = std::array::from_fn(|_| rng.gen_range(0..g.num_vertices()));
            let cache = DistanceCache::new(&g);
            for (i, &e) in cfg.eps.iter().enumerate() {
                a2[i] += crate::metric::event_a2(&cache, v, e, 200) as usize;
                a1[i] += crate::metric::event_a1(&cache, v[0], v[1], v[2], e, 0.5, 200) as usize;
            }
        }
        for i in 0..2 {
            let r = &recs[replica * 2 + i];
            assert_eq!((r.a1_hits, r.a2_hits), (a1[i], a2[i]));
        }
    }
}

#[test]
fn covering_records_are_consistent() {
    let mut cfg = ExperimentConfig::for_kind(ExperimentKind::Covering);
    cfg.n = vec![300];
    cfg.replicas = 8;
    cfg.eps = vec![0.05, 0.2, 100.0];
    let recs = covering_records(&cfg).unwrap();
    assert_eq!(recs.len(), 24);
    for r in &recs {
        assert!(r.cover >= r.packing, "{r:?}");
        assert!(r.star_points <= r.geodesic_len + 1);
        if r.eps == 100.0 {
            assert_eq!(r.cover, (r.star_points > 0) as usize);
        }
    }
    let csv = run_covering(&cfg).unwrap();
    assert!(csv.starts_with(COVERING_HEADER));
}

#[test]
fn fit_exact_power_law() {
    let xs = [1.0, 2.0, 4.0, 8.0, 16.0];
    let ys: Vec<f64> = xs.iter().map(|x| x * x).collect();
    let f = fit_log_log(&xs, &ys).unwrap();
    assert!((f.slope - 2.0).abs() < 1e-12);
    assert!(f.intercept.abs() < 1e-12);
    assert!(f.half_width() < 1e-9);
    let f = fit_log_log(&xs, &[3.0; 5]).unwrap();
    assert!(f.slope.abs() < 1e-12);
    assert!(f.half_width() < 1e-9);
}

#[test]
fn fit_recovers_noisy_slope() {
    // 95% intervals: count coverage over many seeded data sets.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut covered = 0;
    let trials = 400;
    for _ in 0..trials {
        let xs: Vec<f64> = (1..=12).map(|i| i as f64 * 10.0).collect();
        let ys: Vec<f64> = xs
            .iter()
            .map(|x| 2.0 * x.powf(0.25) * (0.1 * (rng.gen::<f64>() - 0.5) * 3.46).exp())
            .collect();
        let f = fit_log_log(&xs, &ys).unwrap();
        covered += (f.slope_ci.0 <= 0.25 && 0.25 <= f.slope_ci.1) as usize;
    }
    let rate = covered as f64 / trials as f64;
    assert!((0.9..=0.99).contains(&rate), "coverage {rate}");
}

#[test]
fn fit_rejects_degenerate_data() {
    let deg = |r: Result<PowerFit, ExperimentError>| matches!(r, Err(ExperimentError::DegenerateData(_)));
    assert!(deg(fit_log_log(&[1.0, 2.0], &[1.0, 2.0])));
    assert!(deg(fit_log_log(&[1.0, 2.0, 3.0], &[1.0, 0.0, 2.0])));
    assert!(deg(fit_log_log(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0])));
    assert!(deg(fit_exponent("a,b\n1,2\n2,4\n4,8\n", "a", "c")));
    assert!(deg(fit_exponent("a,b\n1,2\n2,x\n4,8\n", "a", "b")));
    let f = fit_exponent("a,b\n1,3\n2,12\n4,48\n", "a", "b").unwrap();
    assert!((f.slope - 2.0).abs() < 1e-12);
}

#[test]
fn column_means_group_in_order() {
    let ms = column_means("n,y\n4,1\n2,5\n4,3\n", "n", "y").unwrap();
    assert_eq!(ms.len(), 2);
    assert_eq!((ms[0].x, ms[0].mean, ms[0].count), (4.0, 2.0, 2));
    assert!((ms[0].std_err - 1.0).abs() < 1e-12);
    assert_eq!((ms[1].x, ms[1].mean, ms[1].std_err), (2.0, 5.0, 0.0));
}

#[test]
fn golden_files_regenerate() {
    let dir = scratch_dir("golden");
    let names = write_golden(&dir, 3).unwrap();
    assert_eq!(names.len(), 6);
    for name in names {
        let fresh = std::fs::read_to_string(dir.join(&name)).unwrap();
        let stored = std::fs::read_to_string(golden_dir().join(&name)).unwrap();
        assert_eq!(fresh, stored, "{name}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

fn small_verify_config(golden: PathBuf) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::for_kind(ExperimentKind::Verify);
    cfg.max_quad_n = 2;
    cfg.max_lm_n = 3;
    cfg.census_k = 2;
    cfg.golden_dir = golden;
    cfg
}

#[test]
fn verify_passes_on_clean_build() {
    let rep = verify_census(&small_verify_config(golden_dir()));
    assert!(rep.all_passed(), "{}", rep.to_text());
    assert!(rep.checks.len() >= 8);
    assert!(rep.to_text().lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn verify_reports_mutated_golden_file() {
    let dir = scratch_dir("mutated");
    for (name, ..) in golden_files(2) {
        std::fs::copy(golden_dir().join(&name), dir.join(&name)).unwrap();
    }
    let target = dir.join("k2_all_plain.json");
    let text = std::fs::read_to_string(&target).unwrap();
    // Flip one sigma entry.
    let mutated = text.replacen("\"sigma\": [\n        1,", "\"sigma\": [\n        2,", 1);
    assert_ne!(mutated, text);
    std::fs::write(&target, mutated).unwrap();
    std::fs::remove_file(dir.join("k2_dominant_planted.json")).unwrap();
    let rep = verify_census(&small_verify_config(dir.clone()));
    let failed: Vec<&str> = rep.failures().map(|c| c.name.as_str()).collect();
    assert_eq!(failed, ["golden k2_dominant_planted.json", "golden k2_all_plain.json"]);
    assert!(rep.failures().all(|c| !c.detail.is_empty()));
    assert!(rep.to_text().contains("FAIL golden k2_all_plain.json: line"));
    std::fs::remove_dir_all(&dir).unwrap();
}
