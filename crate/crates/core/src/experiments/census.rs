use std::collections::HashSet;
use std::path::Path;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};

use super::{ExperimentConfig, ExperimentError};
use crate::cvs::{count_quadrangulations, cvs_reverse};
use crate::encodings::{all_labeled_trees, contour_of_tree, motzkin_count, motzkin_count_positive, tree_of_contour};
use crate::metric::Graph;
use crate::multipoint::{
    delayed_lm_codes, enumerate_lm, labeled_map_code, lm_images, LabeledMap, RootChoice,
};
use crate::planar_map::enumerate_rooted_quadrangulations;
use crate::schemes::{
    census_json, count_labeled_maps_exact, decompose, decompose_planted, enumerate_preschemes, enumerate_schemes,
    reconstruct, reconstruct_planted,
};

/// One line of a census report.
#[derive(Clone, Debug, PartialEq)]
pub struct CensusCheck {
    pub name: String,
    pub passed: bool,
    /// Counts on success, a counterexample on failure.
    pub detail: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CensusReport {
    pub checks: Vec<CensusCheck>,
}

impl CensusReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CensusCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// One `PASS`/`FAIL` line per check. Timings are left out so the text
    /// is reproducible.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            s.push_str(&format!("{tag} {}: {}\n", c.name, c.detail));
        }
        s
    }

    fn run(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<String, String>) {
        let t = Instant::now();
        let r = f();
        let (passed, detail) = match r {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        self.checks.push(CensusCheck {
            name: name.into(),
            passed,
            detail,
            seconds: t.elapsed().as_secs_f64(),
        });
    }
}

fn lm_json(lm: &LabeledMap) -> String {
    let m = &lm.m;
    serde_json::json!({
        "darts": m.darts(),
        "alpha": m.alpha_perm(),
        "sigma": m.sigma_perm(),
        "root": m.root(),
        "face_names": lm.face_names,
        "labels": lm.labels,
    })
    .to_string()
}

/// Golden census files for face count `k + 1`: `(file name, k, dominant
/// only, planted)`.
pub fn golden_files(census_k: usize) -> Vec<(String, usize, bool, bool)> {
    let mut out = Vec::new();
    for k in 2..=census_k {
        for dominant in [true, false] {
            // The full k = 3 census is not shipped.
            if k >= 3 && !dominant {
                continue;
            }
            for planted in [false, true] {
                let name = format!(
                    "k{k}_{}_{}.json",
                    if dominant { "dominant" } else { "all" },
                    if planted { "planted" } else { "plain" }
                );
                out.push((name, k, dominant, planted));
            }
        }
    }
    out
}

/// Regenerates the golden census files into `dir`.
pub fn write_golden(dir: &Path, census_k: usize) -> Result<Vec<String>, ExperimentError> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for (name, k, dominant, planted) in golden_files(census_k) {
        let ss = enumerate_schemes(k, dominant, planted).map_err(|e| ExperimentError::DegenerateData(e.to_string()))?;
        std::fs::write(dir.join(&name), census_json(k, dominant, planted, &ss))?;
        written.push(name);
    }
    Ok(written)
}

fn first_difference(a: &str, b: &str) -> String {
    for (i, (x, y)) in a.lines().zip(b.lines()).enumerate() {
        if x != y {
            return format!("line {}: expected `{}`, found `{}`", i + 1, x.trim(), y.trim());
        }
    }
    format!("length differs: expected {} lines, found {}", a.lines().count(), b.lines().count())
}

fn brute_walks(a: i64, b: i64, r: usize, positive: bool) -> u64 {
    let mut count = 0;
    for code in 0..3u64.pow(r as u32) {
        let (mut v, mut c, mut ok) = (a, code, true);
        for step in 1..=r {
            v += (c % 3) as i64 - 1;
            c /= 3;
            ok &= !(positive && step < r && v <= 0);
        }
        count += (ok && v == b) as u64;
    }
    count
}

/// Runs the exact checks within the config's oracle bounds. Failures are
/// report entries, never errors.
pub fn verify_census(cfg: &ExperimentConfig) -> CensusReport {
    let mut rep = CensusReport::default();
    let qn = cfg.max_quad_n;
    let ln = cfg.max_lm_n;

    rep.run(format!("quadrangulation census n<={qn}"), || {
        let t = Instant::now();
        let mut counts = Vec::new();
        for n in 1..=qn {
            let got = enumerate_rooted_quadrangulations(n).map_err(|e| e.to_string())?.len();
            let want = count_quadrangulations(n);
            if BigUint::from(got) != want {
                return Err(format!("n={n}: enumerated {got}, formula {want}"));
            }
            counts.push(got.to_string());
        }
        if t.elapsed().as_secs_f64() >= 60.0 {
            return Err(format!("took {:.1} s", t.elapsed().as_secs_f64()));
        }
        Ok(counts.join(","))
    });

    rep.run(format!("tree contour roundtrip and CVS distances n<={qn}"), || {
        let mut trees = 0;
        for n in 1..=qn {
            for t in all_labeled_trees(n) {
                let back = tree_of_contour(&contour_of_tree(&t)).map_err(|e| e.to_string())?;
                if back != t {
                    return Err(format!("contour roundtrip: {:?}", t.labels()));
                }
                for choice in RootChoice::BOTH {
                    let pq = cvs_reverse(&t, choice);
                    let bfs = Graph::from_map(pq.q.map()).bfs(pq.v_star).dist;
                    if bfs != pq.distance_profile() {
                        return Err(format!("distance identity: tree labels {:?}", t.labels()));
                    }
                }
                trees += 1;
            }
        }
        Ok(format!("{trees} trees"))
    });

    rep.run("Motzkin reflection and cyclic lemma, arguments <= 8", || {
        for r in 0..=8usize {
            for a in -8..=8i64 {
                for b in -8..=8i64 {
                    if motzkin_count(a, b, r) != BigUint::from(brute_walks(a, b, r, false))
                        || motzkin_count_positive(a, b, r) != BigUint::from(brute_walks(a, b, r, true))
                    {
                        return Err(format!("count a={a} b={b} r={r}"));
                    }
                    if a > 0 && b > 0 {
                        let refl = BigInt::from(motzkin_count(a, b, r)) - BigInt::from(motzkin_count(a, -b, r));
                        if BigInt::from(motzkin_count_positive(a, b, r)) != refl {
                            return Err(format!("reflection a={a} b={b} r={r}"));
                        }
                    }
                }
                if a > 0 && r > 0 && motzkin_count_positive(a, 0, r) * r != motzkin_count(a, 0, r) * a as u64 {
                    return Err(format!("cyclic lemma a={a} r={r}"));
                }
            }
            if r >= 2 && motzkin_count_positive(0, 0, r) * (r - 1) != motzkin_count(1, 0, r - 1) {
                return Err(format!("excursion cyclic lemma r={r}"));
            }
        }
        Ok("all pass".into())
    });

    if cfg.census_k >= 3 {
        rep.run("dominant pre-schemes with 4 faces", || {
            let ps = enumerate_preschemes(3).map_err(|e| e.to_string())?;
            let dom: Vec<_> = ps.iter().filter(|p| p.is_dominant()).collect();
            let shapes: HashSet<_> = dom.iter().map(|p| p.shape_code()).collect();
            if (dom.len(), shapes.len()) != (16, 5) {
                return Err(format!("{} labeled, {} shapes", dom.len(), shapes.len()));
            }
            Ok("16 labeled, 5 shapes".into())
        });
    }

    for k in 2..=cfg.census_k {
        rep.run(format!("dominant scheme sizes k={k}"), || {
            let plain = enumerate_schemes(k, true, false).map_err(|e| e.to_string())?;
            let planted = enumerate_schemes(k, true, true).map_err(|e| e.to_string())?;
            for s in &plain {
                let m = s.map();
                if m.num_edges() != 4 * k - 3 || m.num_vertices() != 3 * k - 2 {
                    return Err(format!("{} edges, {} vertices: {}", m.num_edges(), m.num_vertices(), m.to_json()));
                }
            }
            for s in &planted {
                let m = s.map();
                if m.num_edges() != 4 * k - 1 || m.num_vertices() != 3 * k {
                    return Err(format!("planted {} edges, {} vertices: {}", m.num_edges(), m.num_vertices(), m.to_json()));
                }
            }
            Ok(format!("{} plain, {} planted", plain.len(), planted.len()))
        });
    }

    for (name, k, dominant, planted) in golden_files(cfg.census_k) {
        let path = cfg.golden_dir.join(&name);
        rep.run(format!("golden {name}"), || {
            let stored = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
            let ss = enumerate_schemes(k, dominant, planted).map_err(|e| e.to_string())?;
            let fresh = census_json(k, dominant, planted, &ss);
            if stored != fresh {
                return Err(first_difference(&fresh, &stored));
            }
            Ok(format!("{} schemes", ss.len()))
        });
    }

    rep.run(format!("reverse construction two-to-one on LM n<={ln}"), || {
        let mut sizes = Vec::new();
        for n in 1..=ln {
            let lms = enumerate_lm(n, 3).map_err(|e| e.to_string())?;
            let images = lm_images(&lms);
            let distinct: HashSet<_> = images.iter().cloned().collect();
            if distinct.len() != images.len() {
                return Err(format!("n={n}: {} images, {} distinct", images.len(), distinct.len()));
            }
            if n <= qn {
                let mut q_side = HashSet::new();
                for q in enumerate_rooted_quadrangulations(n).map_err(|e| e.to_string())? {
                    q_side.extend(delayed_lm_codes(&q, 3));
                }
                if q_side != distinct {
                    return Err(format!("n={n}: image is not the delayed quadrangulation side"));
                }
            }
            sizes.push(format!("{}->{}", lms.len(), images.len()));
        }
        Ok(sizes.join(","))
    });

    rep.run(format!("decompose/reconstruct on LM 2<=n<={ln}"), || {
        let mut total = 0;
        for n in 2..=ln {
            for lm in enumerate_lm(n, 3).map_err(|e| e.to_string())? {
                let code = labeled_map_code(&lm);
                let plain = decompose(&lm).and_then(|d| reconstruct(&d));
                let planted = decompose_planted(&lm).and_then(|d| reconstruct_planted(&d));
                for (kind, back) in [("plain", plain), ("planted", planted)] {
                    match back {
                        Ok(b) if labeled_map_code(&b) == code => {}
                        Ok(_) => return Err(format!("{kind} mismatch: {}", lm_json(&lm))),
                        Err(e) => return Err(format!("{kind} {e}: {}", lm_json(&lm))),
                    }
                }
                total += 1;
            }
        }
        Ok(format!("{total} labeled maps"))
    });

    rep.run(format!("scheme sum equals |LM| for 2<=n<={ln}"), || {
        let schemes = enumerate_schemes(2, false, false).map_err(|e| e.to_string())?;
        let mut sizes = Vec::new();
        for n in 2..=ln {
            let mut total = BigUint::from(0u32);
            for s in &schemes {
                total += count_labeled_maps_exact(s, n).map_err(|e| e.to_string())?;
            }
            let lms = enumerate_lm(n, 3).map_err(|e| e.to_string())?.len();
            if total != BigUint::from(lms) {
                return Err(format!("n={n}: formula {total}, census {lms}"));
            }
            sizes.push(lms.to_string());
        }
        Ok(sizes.join(","))
    });

    rep
}
