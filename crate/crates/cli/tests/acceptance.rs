//! End-to-end acceptance checks. Each criterion runs to completion and
//! prints one PASS/FAIL line; the process fails if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use cdpers::christoffel::{box_grid, stability_gap, BasisFamily, BasisSpec, ChristoffelModel};
use cdpers::diagram_metrics::bottleneck;
use cdpers::grid_complex::{build_freudenthal, lower_star, pl_error_bound, FreudenthalComplex};
use cdpers::persistence::{compute_persistence, BoundaryMatrix, PersistenceDiagram};
use cdpers::pointcloud::{distance_function, transport_functional_gap, EmpiricalMeasure};
use cdpers_cli::pipeline::run;
use cdpers_cli::presets::{
    cube_skeleton, figure_eight, five_intervals, three_shapes, CirclePair, CIRCLE_EPS, CUBE_LOOPS,
};
use cdpers_cli::{
    cmd_resolution_sweep, cmd_snr_table, FiltrationKind, Input, Method, RunConfig, SnrOptions,
    GAP_FACTOR,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn random_cloud(rng: &mut ChaCha8Rng, dim: usize, len: usize) -> EmpiricalMeasure {
    let pts = (0..len)
        .map(|_| (0..dim).map(|_| rng.random_range(-1.0..=1.0)).collect())
        .collect();
    EmpiricalMeasure::uniform(dim, pts).unwrap()
}

fn jitter(rng: &mut ChaCha8Rng, mu: &EmpiricalMeasure, step: f64) -> EmpiricalMeasure {
    let coords = mu
        .coords()
        .iter()
        .map(|c| (c + rng.random_range(-step..=step)).clamp(-1.0, 1.0))
        .collect();
    EmpiricalMeasure::from_flat(mu.dim(), coords, mu.weights().to_vec()).unwrap()
}

fn shape_config(spec: cdpers::pointcloud::ShapeSpec, degree: usize, m: usize) -> RunConfig {
    RunConfig::new(Input::Shape(spec), degree, m)
}

fn floor_and_trace_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut worst_floor = f64::INFINITY;
    let mut worst_trace = 0.0f64;
    for trial in 0..20 {
        let n = 1 + trial % 2;
        let d = [2, 4, 6][trial % 3];
        let mu = random_cloud(&mut rng, n, 200);
        let basis = BasisSpec::new(n, d, BasisFamily::ChebyshevTensor).unwrap();
        let model = ChristoffelModel::fit(&mu, &basis, 0.0).map_err(|e| e.to_string())?;
        let floor = model
            .eval_many(&box_grid(n, 251))
            .into_iter()
            .fold(f64::INFINITY, f64::min);
        let trace: f64 = model
            .eval_many(mu.coords())
            .iter()
            .zip(mu.weights())
            .map(|(l, w)| l * w)
            .sum();
        let s = basis.len() as f64;
        let rel = (trace - s).abs() / s;
        worst_floor = worst_floor.min(floor);
        worst_trace = worst_trace.max(rel);
        check(floor >= 1.0 - 1e-9, || {
            format!("trial {trial}: grid minimum {floor}")
        })?;
        check(rel <= 1e-6, || {
            format!("trial {trial}: weighted sum {trace} vs {s}")
        })?;
    }
    Ok(format!(
        "min Λ on grid {worst_floor:.6}, worst trace error {worst_trace:.1e}"
    ))
}

fn basis_independence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let mut worst = 0.0f64;
    for n in 1..=2 {
        for d in 0..=6 {
            let mu = random_cloud(&mut rng, n, 150);
            let fit = |family| {
                let basis = BasisSpec::new(n, d, family).unwrap();
                ChristoffelModel::fit(&mu, &basis, 0.0).unwrap()
            };
            let mono = fit(BasisFamily::Monomial);
            let cheb = fit(BasisFamily::ChebyshevTensor);
            let mut points = box_grid(n, 41);
            points.extend_from_slice(mu.coords());
            for (a, b) in mono.eval_many(&points).iter().zip(cheb.eval_many(&points)) {
                let rel = (a - b).abs() / b;
                worst = worst.max(rel);
                check(rel <= 1e-6, || format!("n={n} d={d}: {a} vs {b}"))?;
            }
        }
    }
    Ok(format!("worst relative difference {worst:.1e}"))
}

fn stability_inequalities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let mut local_cases = 0;
    for trial in 0..50 {
        let n = 1 + trial % 2;
        let d = 1 + trial % 3;
        let len = 40 + (trial * 13) % 61;
        let x = random_cloud(&mut rng, n, len);
        let y = if trial % 5 == 0 {
            random_cloud(&mut rng, n, len)
        } else {
            jitter(&mut rng, &x, 10f64.powi(-((trial % 5) as i32 + 3)))
        };
        let basis = BasisSpec::new(n, d, BasisFamily::ChebyshevTensor).unwrap();
        let mx = ChristoffelModel::fit(&x, &basis, 0.0).map_err(|e| e.to_string())?;
        let my = ChristoffelModel::fit(&y, &basis, 0.0).map_err(|e| e.to_string())?;
        let r = stability_gap(&mx, &my, &x, &y, &box_grid(n, 250)).map_err(|e| e.to_string())?;
        check(r.relative_holds, || {
            format!("trial {trial}: relative bound {r:?}")
        })?;
        check(r.log_holds, || format!("trial {trial}: log bound {r:?}"))?;
        check(r.local_holds, || {
            format!("trial {trial}: local bound {r:?}")
        })?;
        local_cases += usize::from(r.local_premise);
        let lip = (4 * d * d) as f64 * r.sup_y;
        let gap =
            transport_functional_gap(&x, &y, |p| my.eval(p), lip).map_err(|e| e.to_string())?;
        check(gap.holds, || {
            format!("trial {trial}: transport bound {gap:?}")
        })?;
    }
    check(local_cases > 0, || "no pair met the local premise".into())?;
    Ok(format!("50 pairs, {local_cases} within the local regime"))
}

fn clearing_matches_naive() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    for trial in 0..100 {
        let n = 1 + trial % 2;
        let m = 1 + trial % 4;
        let c = build_freudenthal(n, m).unwrap();
        let levels = if trial % 3 == 0 { 3 } else { 1000 };
        let vals: Vec<f64> = (0..c.vertex_count())
            .map(|_| rng.random_range(0..levels) as f64 / levels as f64)
            .collect();
        let f = lower_star(&c, &vals).unwrap();
        let matrix = BoundaryMatrix::from_filtration(&f, n);
        check(matrix.reduce() == matrix.reduce_naive(), || {
            format!("trial {trial} (n={n}, m={m}): pairings differ")
        })?;
    }
    Ok("100 filtrations, identical pairings".into())
}

fn eight_points_on_a_circle() -> Outcome {
    let cloud: Vec<f64> = (0..8)
        .flat_map(|k| {
            let t = std::f64::consts::TAU * k as f64 / 8.0;
            [0.4 * t.cos(), 0.4 * t.sin()]
        })
        .collect();
    let c = FreudenthalComplex::skeleton(2, 250, 2, usize::MAX).unwrap();
    let vals: Vec<f64> = c
        .vertex_coords_flat()
        .chunks(2)
        .map(|x| distance_function(&cloud, 2, x))
        .collect();
    let d = compute_persistence(&lower_star(&c, &vals).unwrap(), 1);
    let h0 = d.degree(0);
    let h1 = d.significant_intervals(1, 1);
    let deaths: Vec<f64> = h0
        .iter()
        .filter(|i| !i.is_infinite())
        .map(|i| i.death)
        .collect();
    let summary = format!(
        "H0 {} intervals, finite deaths in [{:.4}, {:.4}]; H1 top {:?}",
        h0.len(),
        deaths.iter().copied().fold(f64::INFINITY, f64::min),
        deaths.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        h1.first().map(|i| (i.birth, i.death))
    );
    check(h0.len() == 8, || summary.clone())?;
    check(h0.iter().filter(|i| i.is_infinite()).count() == 1, || {
        summary.clone()
    })?;
    check(deaths.iter().all(|t| (t - 0.2).abs() <= 0.02), || {
        format!("expected deaths at 0.2 ± 0.02: {summary}")
    })?;
    let loop_ok = h1
        .first()
        .is_some_and(|i| (i.birth - 0.2).abs() <= 0.02 && (i.death - 0.4).abs() <= 0.02);
    check(loop_ok, || format!("expected H1 ≈ [0.2, 0.4): {summary}"))?;
    Ok(summary)
}

fn degree_caps_one_dimensional_features() -> Outcome {
    let mut notes = Vec::new();
    for d in [4, 8, 12] {
        let (_, out) =
            run(&shape_config(five_intervals(500, 1), d, 250)).map_err(|e| e.to_string())?;
        let diagram = &out.diagram;
        let h0 = diagram.degree(0);
        if d == 4 {
            check(h0.len() == 4, || {
                format!("d=4: {} intervals in H0", h0.len())
            })?;
            notes.push("d=4: 4 intervals".to_string());
            continue;
        }
        let significant = diagram.significant_count(0, GAP_FACTOR);
        let top = diagram.significant_intervals(0, 6);
        let ratio = if top.len() > 5 {
            let fifth = if top[4].is_infinite() {
                f64::INFINITY
            } else {
                top[4].length()
            };
            fifth / top[5].length()
        } else {
            f64::INFINITY
        };
        check(significant == 5 && ratio >= GAP_FACTOR, || {
            format!("d={d}: {significant} significant, fifth/sixth ratio {ratio:.2}")
        })?;
        notes.push(format!("d={d}: 5 significant (gap {ratio:.1})"));
    }
    Ok(notes.join("; "))
}

fn betti_signature(diagram: &PersistenceDiagram) -> (usize, usize) {
    (
        diagram.significant_count(0, GAP_FACTOR),
        diagram.significant_count(1, GAP_FACTOR),
    )
}

fn figure_eight_topology() -> Outcome {
    let mut notes = Vec::new();
    for pair in CirclePair::ALL {
        let mut cfg = shape_config(figure_eight(pair, 1000, 1), 12, 250);
        cfg.eps = CIRCLE_EPS;
        cfg.max_homology_degree = Some(1);
        let (_, out) = run(&cfg).map_err(|e| e.to_string())?;
        let got = betti_signature(&out.diagram);
        check(got == pair.expected_betti(), || {
            format!(
                "{pair:?}: got {got:?}, expected {:?}",
                pair.expected_betti()
            )
        })?;
        notes.push(format!("{pair:?} {got:?}"));
    }
    Ok(notes.join(", "))
}

fn noise_robustness_ordering() -> Outcome {
    let table = cmd_snr_table(&SnrOptions {
        base: cube_skeleton(50, 0, 0),
        methods: vec![
            Method {
                kind: FiltrationKind::DistanceFunction,
                degree: 0,
            },
            Method {
                kind: FiltrationKind::Christoffel,
                degree: 6,
            },
        ],
        noise_levels: vec![25, 250],
        trials: 10,
        resolution: 50,
        signal_count: CUBE_LOOPS,
        homology_degree: 1,
        eps: 0.0,
        seed: 0,
    })
    .map_err(|e| e.to_string())?;
    let mut notes = Vec::new();
    for (li, m) in table.noise_levels.iter().enumerate() {
        let (dist, cd) = (table.median(0, li), table.median(1, li));
        notes.push(format!("M={m}: christoffel {cd:.2} vs distance {dist:.2}"));
        check(cd > dist, || notes.join("; "))?;
    }
    Ok(notes.join("; "))
}

fn resolution_convergence() -> Outcome {
    let cfg = shape_config(three_shapes(10_000, 0, 1), 12, 50);
    let report =
        cmd_resolution_sweep(&cfg, &[50, 100, 150, 200, 250], None).map_err(|e| e.to_string())?;
    let deltas: Vec<f64> = report.steps.iter().map(|s| s.max).collect();
    let summary = format!("deltas {deltas:.4?}");
    check(deltas.iter().all(|d| *d > 0.0), || summary.clone())?;
    check(deltas.last() < deltas.first(), || summary.clone())?;
    Ok(summary)
}

/// `Σ aₖ sin(ωₖ·x + φₖ)` with Lipschitz constant `Σ |aₖ| ‖ωₖ‖`.
struct TrigSum {
    terms: Vec<(f64, Vec<f64>, f64)>,
}

impl TrigSum {
    fn random(rng: &mut ChaCha8Rng, n: usize) -> Self {
        let terms = (0..4)
            .map(|_| {
                let amp = rng.random_range(-1.0..1.0);
                let freq = (0..n).map(|_| rng.random_range(-6.0..6.0)).collect();
                (amp, freq, rng.random_range(0.0..std::f64::consts::TAU))
            })
            .collect();
        Self { terms }
    }

    fn lipschitz(&self) -> f64 {
        self.terms
            .iter()
            .map(|(a, w, _)| a.abs() * w.iter().map(|v| v * v).sum::<f64>().sqrt())
            .sum()
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(a, w, p)| a * (w.iter().zip(x).map(|(wi, xi)| wi * xi).sum::<f64>() + p).sin())
            .sum()
    }
}

fn approximation_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1010);
    let mut worst = 0.0f64;
    for trial in 0..20 {
        let n = 1 + trial % 2;
        let m = if n == 1 { 50 } else { 20 };
        let f = TrigSum::random(&mut rng, n);
        let l = f.lipschitz();
        let diagram = |res: usize| {
            let c = build_freudenthal(n, res).unwrap();
            let vals: Vec<f64> = c
                .vertex_coords_flat()
                .chunks(n)
                .map(|x| f.eval(x))
                .collect();
            compute_persistence(&lower_star(&c, &vals).unwrap(), n)
        };
        let (coarse, fine) = (diagram(m), diagram(4 * m));
        let bound = pl_error_bound(l, n, m) + pl_error_bound(l, n, 4 * m);
        for p in 0..=n {
            let (db, _) = bottleneck(&coarse, &fine, p);
            worst = worst.max(db / bound);
            check(db <= bound, || {
                format!("trial {trial} p={p}: {db} > {bound}")
            })?;
        }
    }
    Ok(format!("largest distance/bound ratio {worst:.3}"))
}

fn vertex_value_stability() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1011);
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let n = 1 + trial % 2;
        let c = build_freudenthal(n, if n == 1 { 30 } else { 8 }).unwrap();
        let f: Vec<f64> = (0..c.vertex_count())
            .map(|_| rng.random_range(0.0..1.0))
            .collect();
        let eps = rng.random_range(0.0..0.3);
        let g: Vec<f64> = f.iter().map(|v| v + rng.random_range(-eps..=eps)).collect();
        let gap = f
            .iter()
            .zip(&g)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let df = compute_persistence(&lower_star(&c, &f).unwrap(), n);
        let dg = compute_persistence(&lower_star(&c, &g).unwrap(), n);
        for p in 0..=n {
            let (d, _) = bottleneck(&df, &dg, p);
            if gap > 0.0 {
                worst = worst.max(d / gap);
            }
            check(d <= gap + 1e-9, || {
                format!("trial {trial} p={p}: {d} > {gap}")
            })?;
        }
    }
    Ok(format!("largest distance/gap ratio {worst:.3}"))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion {
            id: 1,
            name: "christoffel floor and trace identity",
            limit: secs(30),
            run: floor_and_trace_identity,
        },
        Criterion {
            id: 2,
            name: "basis independence",
            limit: secs(10),
            run: basis_independence,
        },
        Criterion {
            id: 3,
            name: "wasserstein stability inequalities",
            limit: secs(300),
            run: stability_inequalities,
        },
        Criterion {
            id: 4,
            name: "clearing matches naive reduction",
            limit: secs(60),
            run: clearing_matches_naive,
        },
        Criterion {
            id: 5,
            name: "eight points on a circle",
            limit: secs(60),
            run: eight_points_on_a_circle,
        },
        Criterion {
            id: 6,
            name: "degree caps one-dimensional features",
            limit: secs(60),
            run: degree_caps_one_dimensional_features,
        },
        Criterion {
            id: 7,
            name: "figure-eight topology",
            limit: secs(300),
            run: figure_eight_topology,
        },
        Criterion {
            id: 8,
            name: "noise robustness ordering",
            limit: secs(1800),
            run: noise_robustness_ordering,
        },
        Criterion {
            id: 9,
            name: "resolution convergence",
            limit: secs(600),
            run: resolution_convergence,
        },
        Criterion {
            id: 10,
            name: "piecewise-linear approximation bound",
            limit: secs(300),
            run: approximation_bound,
        },
        Criterion {
            id: 11,
            name: "stability in vertex values",
            limit: secs(60),
            run: vertex_value_stability,
        },
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for c in &criteria {
        let label = format!("{:02} {}", c.id, c.name);
        if !filter.is_empty() && !filter.iter().any(|f| label.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome =
            catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > c.limit => Err(format!("exceeded {:?}", c.limit)),
            other => other,
        };
        let secs = elapsed.as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {label}: PASS ({secs:.1}s) {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {label}: FAIL ({secs:.1}s) {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
