//! Acceptance suite. Runs every criterion, prints one line each, and exits
//! non-zero if any failed.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::Rng;
use rationality::halfint::ProperColoring;
use rationality::integral::greedy_bound;
use rationality::rng::{seeded, SeededRng};
use rationality::*;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("golden examples", golden),
        ("oracle equivalence", oracle_equivalence),
        ("construction soundness", construction_soundness),
        ("greedy bound", greedy_bound_experiment),
        ("max-acyclic exactness", max_acyclic_experiment),
        ("checker metamorphic suite", checker_metamorphic),
        ("cli round trip", cli_round_trip),
    ];
    let mut failed = 0;
    for (index, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!(
                "criterion {} {name}: PASS ({detail}; {})",
                index + 1,
                secs(elapsed)
            ),
            Err(why) => {
                failed += 1;
                println!(
                    "criterion {} {name}: FAIL ({why}; {})",
                    index + 1,
                    secs(elapsed)
                );
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

fn secs(d: Duration) -> String {
    format!("{:.2}s", d.as_secs_f64())
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

fn matrix(name: &str) -> PreferenceMatrix {
    let text = std::fs::read_to_string(fixtures().join(name)).expect("fixture");
    PreferenceMatrix::from_json(&text).expect("fixture parses")
}

fn profile(name: &str) -> VoterProfile {
    let text = std::fs::read_to_string(fixtures().join(name)).expect("fixture");
    VoterProfile::from_json(&text).expect("fixture parses")
}

/// 1-based chains to 0-based.
fn chains(list: &[&[usize]]) -> Vec<Vec<usize>> {
    list.iter()
        .map(|c| c.iter().map(|v| v - 1).collect())
        .collect()
}

fn consistent(p: &VoterProfile, m: &PreferenceMatrix) -> bool {
    p.is_consistent_with(m).expect("dimensions agree")
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

fn golden() -> Outcome {
    let start = Instant::now();

    let m1 = matrix("three_cycle.json");
    ensure!(
        m1.classify() == MatrixClass::Integral,
        "three-cycle not integral"
    );
    match rationality_number(&m1, DEFAULT_EXACT_LIMIT).map_err(|e| e.to_string())? {
        Rationality::Exact { k: 2, certificate } => {
            ensure!(
                certificate.width() == Width(2),
                "three-cycle certificate width"
            );
            ensure!(
                consistent(&certificate, &m1),
                "three-cycle certificate inconsistent"
            );
        }
        other => return Err(format!("three-cycle gave {other:?}")),
    }

    let m2 = matrix("six_cycle.json");
    let r2 = rationality_number(&m2, DEFAULT_EXACT_LIMIT).map_err(|e| e.to_string())?;
    ensure!(
        (r2.lower(), r2.upper()) == (2, 2),
        "six-cycle bounds {:?}",
        (r2.lower(), r2.upper())
    );
    ensure!(
        consistent(&profile("six_cycle_profile.json"), &m2),
        "six-cycle profile inconsistent"
    );
    let mut singles = 0;
    for mask in 0u32..1 << 6 {
        let (a, b): (Vec<usize>, Vec<usize>) = (0..6).partition(|&v| (mask >> v) & 1 == 0);
        for pa in permutations(&a) {
            for pb in permutations(&b) {
                let cs: Vec<Vec<usize>> = [pa.clone(), pb.clone()]
                    .into_iter()
                    .filter(|c| !c.is_empty())
                    .collect();
                let voter = PartialOrder::from_chains(6, &cs).expect("partition");
                singles += 1;
                ensure!(
                    !consistent(&VoterProfile::single(voter), &m2),
                    "single voter {cs:?} fits the six-cycle"
                );
            }
        }
    }

    let m5 = matrix("two_components.json");
    let partition = components(&m5).map_err(|e| e.to_string())?;
    ensure!(
        partition.components == chains(&[&[1, 2, 3], &[4, 5]]),
        "two-component components"
    );
    let first = VoterProfile::single(PartialOrder::from_chains(3, &[vec![0, 1], vec![2]]).unwrap());
    let second = VoterProfile::single(PartialOrder::total(&[0, 1]).unwrap());
    let combined =
        combine_component_profiles(&partition, &[first, second]).map_err(|e| e.to_string())?;
    ensure!(
        consistent(&combined, &m5),
        "two-component L/R profile inconsistent"
    );
    let r5 = rationality_number(&m5, DEFAULT_EXACT_LIMIT).map_err(|e| e.to_string())?;
    ensure!((r5.lower(), r5.upper()) == (2, 2), "two-component bounds");

    let m6 = matrix("two_colourable.json");
    let coloring = ProperColoring {
        classes: chains(&[&[2, 3, 5], &[1, 4]]),
    };
    let built = two_voter_construction(&m6, &coloring).map_err(|e| e.to_string())?;
    ensure!(
        consistent(&built, &m6) && built.width() == Width(2),
        "two-colourable construction"
    );

    let m7 = matrix("dichromatic_three.json");
    let t7 = Tournament::from_matrix(&m7).map_err(|e| e.to_string())?;
    let (k7, witness) =
        dichromatic_number_exact(&t7, DEFAULT_EXACT_LIMIT).map_err(|e| e.to_string())?;
    let brute7 = oracle::brute_dichromatic(&t7).map_err(|e| e.to_string())?;
    ensure!(
        k7 == 3 && brute7 == 3,
        "dichromatic-three dichromatic {k7} / {brute7}"
    );
    witness.validate(&t7).map_err(|e| e.to_string())?;
    let known = Dicoloring {
        classes: chains(&[&[3, 1, 4], &[5, 6], &[7, 2]]),
    };
    let voter = voter_from_dicoloring(&t7, &known).map_err(|e| e.to_string())?;
    let expected = PartialOrder::from_chains(7, &chains(&[&[3, 1, 4], &[5, 6], &[7, 2]])).unwrap();
    ensure!(voter.voters()[0] == expected, "dichromatic-three voter chains");
    ensure!(consistent(&voter, &m7), "dichromatic-three voter inconsistent");

    let elapsed = start.elapsed();
    ensure!(elapsed < Duration::from_secs(1), "took {}", secs(elapsed));
    Ok(format!("{singles} single voters ruled out"))
}

fn random_order(rng: &mut SeededRng, n: usize) -> PartialOrder {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let density: f64 = rng.gen();
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                pairs.push((perm[a], perm[b]));
            }
        }
    }
    PartialOrder::from_cover_pairs(n, &pairs).expect("acyclic by construction")
}

fn oracle_equivalence() -> Outcome {
    let mut rng = seeded(2);
    for trial in 0..200 {
        let n = rng.gen_range(1..=10);
        let order = random_order(&mut rng, n);
        let brute = oracle::brute_width(&order).map_err(|e| e.to_string())?;
        let chains = order.min_chain_decomposition();
        ensure!(
            order.width() == brute,
            "poset trial {trial}: width mismatch"
        );
        ensure!(
            chains.len() == brute.get(),
            "poset trial {trial}: chain count mismatch"
        );
    }
    for seed in 0..100 {
        let n = 1 + (seed as usize % 14);
        let t = random_tournament(n, seed);
        let (k, _) =
            dichromatic_number_exact(&t, DEFAULT_EXACT_LIMIT).map_err(|e| e.to_string())?;
        let brute = oracle::brute_dichromatic(&t).map_err(|e| e.to_string())?;
        ensure!(k == brute, "tournament seed {seed}: {k} vs {brute}");
    }
    for seed in 1000..1050 {
        let n = 1 + (seed as usize % 9);
        let t = random_tournament(n, seed);
        let m = t.to_matrix();
        let alpha = oracle::brute_alpha_integral(&m).map_err(|e| e.to_string())?;
        let brute = oracle::brute_dichromatic(&t).map_err(|e| e.to_string())?;
        let solved = rationality_number(&m, DEFAULT_EXACT_LIMIT).map_err(|e| e.to_string())?;
        ensure!(
            alpha == brute && solved.is_exact() && solved.upper() == alpha,
            "matrix seed {seed}: {alpha} / {brute} / {solved:?}"
        );
    }
    Ok("200 posets, 100 tournaments, 50 matrices".into())
}

fn half_entry(rng: &mut SeededRng) -> Rational {
    match rng.gen_range(0..3) {
        0 => Rational::ZERO,
        1 => Rational::HALF,
        _ => Rational::ONE,
    }
}

fn two_component_instance(rng: &mut SeededRng) -> (PreferenceMatrix, usize) {
    let a = rng.gen_range(1..=5);
    let b = rng.gen_range(1..=5);
    let n = a + b;
    // consecutive members of each block are unanimous, so each block is connected
    PreferenceMatrix::from_upper(n, |i, j| {
        let same = (i < a) == (j < a);
        if !same {
            Rational::HALF
        } else if j == i + 1 {
            if rng.gen() {
                Rational::ONE
            } else {
                Rational::ZERO
            }
        } else {
            half_entry(rng)
        }
    })
    .map(|m| (m, a))
    .expect("valid entries")
}

fn component_profile(sub: &PreferenceMatrix) -> VoterProfile {
    let coloring = greedy_coloring(&sub.unanimity_graph());
    two_voter_construction(sub, &coloring).expect("half-integral component")
}

fn construction_soundness() -> Outcome {
    let mut rng = seeded(3);
    for trial in 0..100 {
        let n = rng.gen_range(1..=12);
        let m = PreferenceMatrix::from_upper(n, |_, _| half_entry(&mut rng)).unwrap();
        let coloring = greedy_coloring(&m.unanimity_graph());
        let p = two_voter_construction(&m, &coloring).map_err(|e| e.to_string())?;
        let classes = coloring.classes.iter().filter(|c| !c.is_empty()).count();
        ensure!(
            consistent(&p, &m),
            "half-integral trial {trial}: inconsistent"
        );
        ensure!(
            p.width().get() == classes,
            "half-integral trial {trial}: width {:?} vs {classes}",
            p.width()
        );
    }
    for trial in 0..50 {
        let (m, a) = two_component_instance(&mut rng);
        let partition = components(&m).map_err(|e| e.to_string())?;
        let expected: Vec<Vec<usize>> = vec![(0..a).collect(), (a..m.n()).collect()];
        ensure!(
            partition.components == expected,
            "two-component trial {trial}: components"
        );
        let parts: Vec<VoterProfile> = partition
            .submatrices
            .iter()
            .map(component_profile)
            .collect();
        let combined = combine_component_profiles(&partition, &parts).map_err(|e| e.to_string())?;
        let widest = parts.iter().map(|p| p.width()).max().unwrap();
        ensure!(
            consistent(&combined, &m),
            "two-component trial {trial}: inconsistent"
        );
        ensure!(
            combined.width() == widest,
            "two-component trial {trial}: width"
        );
    }
    Ok("100 half-integral, 50 two-component".into())
}

fn greedy_bound_experiment() -> Outcome {
    let mut worst = 0.0f64;
    for n in [32usize, 64, 128] {
        let bound = greedy_bound(n).ceil() as usize;
        for seed in 1..=20 {
            let coloring = greedy_dicoloring(&random_tournament(n, seed));
            let count = coloring.class_count();
            ensure!(count <= bound, "n={n} seed={seed}: {count} > {bound}");
            worst = worst.max(count as f64 / bound as f64);
        }
    }
    for n in [10usize, 14, 18] {
        for seed in 1..=5 {
            let t = random_tournament(n, seed);
            let greedy = greedy_dicoloring(&t).class_count();
            let (k, _) =
                dichromatic_number_exact(&t, DEFAULT_EXACT_LIMIT).map_err(|e| e.to_string())?;
            ensure!(
                greedy >= k,
                "n={n} seed={seed}: greedy {greedy} below exact {k}"
            );
        }
    }
    Ok(format!("60 runs, worst greedy/bound ratio {worst:.3}"))
}

/// Largest triangle-free vertex set, over all subsets.
fn exhaustive_max_acyclic(t: &Tournament) -> usize {
    let n = t.n();
    let mut best = 0;
    for mask in 0u32..1 << n {
        let members: Vec<usize> = (0..n).filter(|&v| (mask >> v) & 1 == 1).collect();
        if members.len() <= best {
            continue;
        }
        let cyclic = members.iter().any(|&a| {
            members
                .iter()
                .any(|&b| t.beats(a, b) && members.iter().any(|&c| t.beats(b, c) && t.beats(c, a)))
        });
        if !cyclic {
            best = members.len();
        }
    }
    best
}

fn max_acyclic_experiment() -> Outcome {
    let n = 14;
    let reference = 2.0 * (n as f64).log2() + 1.0;
    let mut above = 0;
    let mut sizes = Vec::new();
    for seed in 1..=20 {
        let t = random_tournament(n, seed);
        let found = max_acyclic_subset(&t, DEFAULT_EXACT_LIMIT);
        let brute = exhaustive_max_acyclic(&t);
        ensure!(
            found.exact && found.size == brute,
            "seed {seed}: {} vs {brute}",
            found.size
        );
        if found.size as f64 > reference {
            above += 1;
        }
        sizes.push(found.size);
    }
    let (lo, hi) = (sizes.iter().min().unwrap(), sizes.iter().max().unwrap());
    Ok(format!(
        "sizes {lo}..{hi}, {above}/20 above 2log2(n)+1 = {reference:.2}"
    ))
}

fn random_profile(rng: &mut SeededRng, n: usize) -> VoterProfile {
    let count = rng.gen_range(1..=4);
    let voters = (0..count).map(|_| random_order(rng, n)).collect();
    VoterProfile::new(n, voters).expect("nonempty")
}

fn fractions(p: &VoterProfile) -> Vec<(Rational, Rational)> {
    let n = p.n();
    let mut out = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                out.push((p.strong_fraction(i, j), p.weak_fraction(i, j)));
            }
        }
    }
    out
}

fn checker_metamorphic() -> Outcome {
    let mut rng = seeded(6);
    let mut weakened = 0;
    for trial in 0..500 {
        let n = rng.gen_range(2..=8);
        let p = random_profile(&mut rng, n);
        let m = if rng.gen_bool(0.5) {
            PreferenceMatrix::from_upper(n, |i, j| p.strong_fraction(i, j)).unwrap()
        } else {
            PreferenceMatrix::from_upper(n, |_, _| half_entry(&mut rng)).unwrap()
        };

        let mut twice = p.voters().to_vec();
        twice.extend_from_slice(p.voters());
        let twice = VoterProfile::new(n, twice).unwrap();
        ensure!(
            fractions(&p) == fractions(&twice),
            "trial {trial}: fractions moved"
        );
        ensure!(
            consistent(&p, &m) == consistent(&twice, &m),
            "trial {trial}: verdict moved"
        );

        if !consistent(&p, &m) {
            continue;
        }
        let who = rng.gen_range(0..p.len());
        let legal: Vec<(usize, usize)> = p.voters()[who]
            .pairs()
            .into_iter()
            .filter(|&(x, y)| p.voters()[who].weaken(x, y).is_ok())
            .collect();
        if let Some(&(x, y)) = legal.choose(&mut rng) {
            let mut voters = p.voters().to_vec();
            voters[who] = voters[who].weaken(x, y).unwrap();
            let after = VoterProfile::new(n, voters).unwrap();
            ensure!(
                consistent(&after, &m),
                "trial {trial}: weaken({},{}) broke consistency",
                x + 1,
                y + 1
            );
            weakened += 1;
        }
    }
    Ok(format!("500 trials, {weakened} weakenings"))
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_rationality"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn cli_round_trip() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let mut certified = 0;
    for name in ["three_cycle", "six_cycle", "generic", "two_components", "two_colourable", "dichromatic_three"] {
        let input = fixtures()
            .join(format!("{name}.json"))
            .to_string_lossy()
            .into_owned();
        let cert = path(&format!("{name}.cert.json"));
        let first = cli(&["analyze", "--input", &input, "--output", &cert]);
        ensure!(
            first.status.code() == Some(0),
            "{name}: analyze exited {:?}",
            first.status
        );
        let bytes = std::fs::read(&cert).map_err(|e| e.to_string())?;
        let again = cli(&["analyze", "--input", &input, "--output", &cert]);
        ensure!(
            again.stdout == first.stdout,
            "{name}: analyze output changed"
        );
        ensure!(
            std::fs::read(&cert).map_err(|e| e.to_string())? == bytes,
            "{name}: certificate changed"
        );
        let verified = cli(&["verify", "--input", &input, "--profile", &cert]);
        ensure!(
            verified.status.code() == Some(0),
            "{name}: certificate does not verify"
        );
        certified += 1;
    }

    let stdout = |o: &std::process::Output| String::from_utf8_lossy(&o.stdout).into_owned();
    let a1 = cli(&[
        "analyze",
        "--input",
        &fixtures().join("three_cycle.json").to_string_lossy(),
    ]);
    ensure!(
        stdout(&a1).starts_with("class=integral alpha=2 certificate=1 voter\n"),
        "three-cycle report: {}",
        stdout(&a1)
    );
    let total = path("total.json");
    std::fs::write(&total, r#"{"n":3,"voters":[{"chains":[[1,2,3]]}]}"#)
        .map_err(|e| e.to_string())?;
    let bad = cli(&[
        "verify",
        "--input",
        &fixtures().join("three_cycle.json").to_string_lossy(),
        "--profile",
        &total,
    ]);
    ensure!(
        bad.status.code() == Some(1),
        "inconsistent verify exited {:?}",
        bad.status
    );
    ensure!(
        stdout(&bad).contains("violation (1,3)"),
        "missing violation (1,3)"
    );

    let reruns: [&[&str]; 3] = [
        &[
            "generate",
            "tournament",
            "--n",
            "10",
            "--seed",
            "1",
            "--output",
        ],
        &[
            "generate", "kpartite", "--n", "8", "--k", "4", "--seed", "1", "--output",
        ],
        &[
            "experiment",
            "max-acyclic",
            "--n",
            "14",
            "--seeds",
            "1..20",
            "--output",
        ],
    ];
    for (r, args) in reruns.iter().enumerate() {
        let mut outputs = Vec::new();
        for copy in 0..2 {
            let out = path(&format!("rerun{r}_{copy}"));
            let mut full = args.to_vec();
            full.push(&out);
            let run = cli(&full);
            ensure!(
                run.status.code() == Some(0),
                "{args:?} exited {:?}",
                run.status
            );
            outputs.push(std::fs::read(&out).map_err(|e| e.to_string())?);
        }
        ensure!(outputs[0] == outputs[1], "{args:?} not byte-identical");
    }
    let bad_kpartite = cli(&[
        "generate",
        "kpartite",
        "--n",
        "6",
        "--k",
        "4",
        "--output",
        &path("x"),
    ]);
    ensure!(
        bad_kpartite.status.code() == Some(2),
        "bad kpartite exited {:?}",
        bad_kpartite.status
    );

    Ok(format!(
        "{certified} certificates re-verified, 3 reruns byte-identical"
    ))
}
