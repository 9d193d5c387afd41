//! The one-shot verification pipeline: every acceptance claim becomes one
//! ledger row; failures are recorded, never fatal.

use crate::ledger::{timed_row, Ledger, Row};
use crate::pipeline::{Level, Pipeline};
use anyhow::{anyhow, Result};
use std::collections::BTreeMap;
use trivex::graph::{verify_mapping, LabeledGraph};
use trivex::group::tower_relators;
use trivex::platonic;
use trivex::spectral::{
    self, dense_eigenvalues, dense_spectrum, extreme_eigenvalues, AdjacencyOperator, Extremes,
    LanczosOptions,
};
use trivex::surface::{self, orient_tk, surface_report, trace_faces, SurfaceReport, Turn};
use trivex::toeplitz;

struct Ctx<'a> {
    pipe: &'a Pipeline,
    levels: Vec<Level>,
    x_values: BTreeMap<usize, Vec<f64>>,
    t_values: BTreeMap<usize, Vec<f64>>,
    x_lanczos: BTreeMap<usize, Extremes>,
    t_lanczos: BTreeMap<usize, Extremes>,
    reports: BTreeMap<usize, SurfaceReport>,
}

impl<'a> Ctx<'a> {
    fn level(&self, k: usize) -> &Level {
        &self.levels[k - 1]
    }
}

fn build_levels(pipe: &Pipeline, k_max: usize) -> Result<Vec<Level>> {
    if pipe.cfg.threads <= 1 || k_max == 1 {
        return (1..=k_max).map(|k| pipe.level(k)).collect();
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = (1..=k_max)
            .map(|k| scope.spawn(move || pipe.level(k)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().map_err(|_| anyhow!("level build panicked"))?)
            .collect()
    })
}

fn lanczos_opts(pipe: &Pipeline) -> LanczosOptions {
    LanczosOptions {
        max_iter: pipe.cfg.iter_cap,
        tol: 1e-8,
        seed: pipe.cfg.seed,
    }
}

fn lanczos_x(pipe: &Pipeline, lvl: &Level) -> Result<Extremes> {
    let op = AdjacencyOperator::from_graph(&lvl.cay.graph);
    Ok(extreme_eigenvalues(
        &op,
        &[vec![1.0; lvl.cay.graph.n()]],
        &lanczos_opts(pipe),
    )?)
}

fn lanczos_t(pipe: &Pipeline, lvl: &Level) -> Result<Extremes> {
    let op = AdjacencyOperator::from_graph(&lvl.t);
    let ones = vec![1.0; lvl.t.n()];
    let sign: Vec<f64> = (0..lvl.t.n())
        .map(|v| if v < lvl.nwhite { 1.0 } else { -1.0 })
        .collect();
    Ok(extreme_eigenvalues(&op, &[ones, sign], &lanczos_opts(pipe))?)
}

fn matching_dual(lvl: &Level, report: &SurfaceReport) -> Result<LabeledGraph> {
    let map = orient_tk(&lvl.t, lvl.nwhite)?;
    let faces = [Turn::Left, Turn::Right]
        .into_iter()
        .map(|t| trace_faces(&map, t))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .find(|f| f.uniform_length() == Some(report.face_length))
        .ok_or_else(|| anyhow!("no face-length-matching convention"))?;
    Ok(surface::dual_graph(&map, &faces)?)
}

pub fn run(pipe: &Pipeline) -> Result<Ledger> {
    let k_max = pipe.cfg.k_max;
    let cap = pipe.cfg.dense_cap;
    let levels = build_levels(pipe, k_max)?;

    let mut x_values = BTreeMap::new();
    let mut t_values = BTreeMap::new();
    let mut x_lanczos = BTreeMap::new();
    let mut t_lanczos = BTreeMap::new();
    let mut reports = BTreeMap::new();
    for k in 1..=k_max {
        let lvl = &levels[k - 1];
        if lvl.cay.graph.n() <= cap && k <= 4 {
            x_values.insert(k, dense_eigenvalues(&lvl.cay.graph, cap)?);
        }
        if lvl.t.n() <= cap && (2..=4).contains(&k) {
            t_values.insert(k, dense_eigenvalues(&lvl.t, cap)?);
        }
    }
    for k in 2..=k_max.min(5) {
        let lvl = &levels[k - 1];
        if !x_values.contains_key(&k) {
            x_lanczos.insert(k, lanczos_x(pipe, lvl)?);
        }
        if !t_values.contains_key(&k) || k == 4 {
            // the k = 4 transform is also run iteratively as the
            // dense/iterative cross-check
            t_lanczos.insert(k, lanczos_t(pipe, lvl)?);
        }
    }
    for k in 1..=k_max {
        let lvl = &levels[k - 1];
        reports.insert(k, surface_report(&lvl.pcp, &lvl.t, lvl.nwhite)?);
    }
    let ctx = Ctx {
        pipe,
        levels,
        x_values,
        t_values,
        x_lanczos,
        t_lanczos,
        reports,
    };

    let mut ledger = Ledger::new(k_max);
    let rows: Vec<Row> = vec![
        row01(&ctx),
        row02(&ctx),
        row03(&ctx),
        row04(&ctx),
        row05(&ctx),
        row06(&ctx),
        row07(&ctx),
        row08(&ctx),
        row09(&ctx),
        row10(&ctx),
        row11(&ctx),
        row12(&ctx),
        row13(),
    ];
    ledger.rows = rows;
    Ok(ledger)
}

fn row01(ctx: &Ctx) -> Row {
    timed_row("AC01", "group sizes 2^N_k", "exact", || {
        let expected: Vec<usize> = (1..=ctx.pipe.cfg.k_max)
            .map(|k| 8 * (k / 3) + 3 * (k % 3) - 1)
            .collect();
        let computed: Vec<usize> = ctx.levels.iter().map(|l| l.pcp.order_log2()).collect();
        Ok((
            format!("{expected:?}"),
            format!("{computed:?}"),
            expected == computed,
        ))
    })
}

fn row02(ctx: &Ctx) -> Row {
    timed_row("AC02", "generator orders 2^n_k", "exact", || {
        let mut expected = Vec::new();
        let mut computed = Vec::new();
        let mut pass = true;
        for k in 2..=ctx.pipe.cfg.k_max {
            let nk = (k as f64).log2().floor() as u32 + 1;
            expected.push(1u64 << nk);
            let pcp = &ctx.level(k).pcp;
            let orders: Vec<u64> = pcp
                .generator_set()
                .iter()
                .map(|(_, g)| pcp.element_order(g))
                .collect();
            pass &= orders.iter().all(|&o| o == 1 << nk);
            computed.push(orders[0]);
        }
        Ok((format!("{expected:?}"), format!("{computed:?}"), pass))
    })
}

const X_TABLE: [(usize, f64); 4] = [(2, 2.828427), (3, 4.340172), (4, 4.475244), (5, 5.160252)];
const T_TABLE: [(usize, f64); 4] = [(2, 2.414213), (3, 2.709275), (4, 2.734089), (5, 2.856615)];

fn lambda1_x(ctx: &Ctx, k: usize) -> Result<f64> {
    if let Some(vals) = ctx.x_values.get(&k) {
        return Ok(vals[vals.len() - 2]);
    }
    ctx.x_lanczos
        .get(&k)
        .map(|e| e.lambda_max)
        .ok_or_else(|| anyhow!("no spectrum for X_{k}"))
}

fn lambda1_t(ctx: &Ctx, k: usize) -> Result<f64> {
    if let Some(vals) = ctx.t_values.get(&k) {
        return Ok(vals[vals.len() - 2]);
    }
    ctx.t_lanczos
        .get(&k)
        .map(|e| e.lambda_max)
        .ok_or_else(|| anyhow!("no spectrum for T_{k}"))
}

fn row03(ctx: &Ctx) -> Row {
    let tol = ctx.pipe.cfg.table_tol;
    timed_row(
        "AC03",
        "X-table eigenvalues + Ramanujan",
        &format!("{tol:.0e}"),
        || {
            let mut computed = Vec::new();
            let mut pass = true;
            for (k, lam) in X_TABLE {
                if k > ctx.pipe.cfg.k_max {
                    continue;
                }
                let l1 = lambda1_x(ctx, k)?;
                computed.push((k, l1));
                pass &= (l1 - lam).abs() <= tol;
                // only the first two stay within 2 sqrt 5
                let is_ram = l1 <= 2.0 * 5f64.sqrt() + 1e-9;
                pass &= is_ram == (k <= 3);
            }
            Ok((
                format!("{X_TABLE:?}"),
                format!("{computed:?}"),
                pass && !computed.is_empty(),
            ))
        },
    )
}

fn row04(ctx: &Ctx) -> Row {
    let tol = ctx.pipe.cfg.table_tol;
    timed_row(
        "AC04",
        "T-table eigenvalues + Ramanujan",
        &format!("{tol:.0e}"),
        || {
            let mut computed = Vec::new();
            let mut pass = true;
            for (k, lam) in T_TABLE {
                if k > ctx.pipe.cfg.k_max {
                    continue;
                }
                let l1 = lambda1_t(ctx, k)?;
                computed.push((k, l1));
                pass &= (l1 - lam).abs() <= tol;
                let is_ram = l1 <= 2.0 * 2f64.sqrt() + 1e-9;
                pass &= is_ram == (k <= 4);
            }
            // dense and iterative solvers agree where both ran
            for (k, ext) in &ctx.t_lanczos {
                if let Some(vals) = ctx.t_values.get(k) {
                    pass &= (ext.lambda_max - vals[vals.len() - 2]).abs() <= 1e-7;
                }
            }
            Ok((
                format!("{T_TABLE:?}"),
                format!("{computed:?}"),
                pass && !computed.is_empty(),
            ))
        },
    )
}

fn row05(ctx: &Ctx) -> Row {
    timed_row("AC05", "squaring identity A_X = A_T^2 - 3", "exact", || {
        let hi = ctx.pipe.cfg.k_max.min(4);
        for k in 1..=hi {
            let lvl = ctx.level(k);
            spectral::verify_squaring_identity(&lvl.cay.graph, &lvl.t, lvl.nwhite)
                .map_err(|m| anyhow!("mismatch at k={k}: {m:?}"))?;
        }
        Ok((
            format!("identity on white vertices, k=1..{hi}"),
            "exact integer equality".into(),
            true,
        ))
    })
}

fn row06(ctx: &Ctx) -> Row {
    timed_row(
        "AC06",
        "spectral structure",
        "1e-9 / 1e-8",
        || {
            let mut pass = true;
            let mut notes = Vec::new();
            // the dense path must actually have covered the advertised range
            let k_max = ctx.pipe.cfg.k_max;
            pass &= ctx.x_values.len() + ctx.x_lanczos.len() >= k_max.min(5);
            pass &= ctx.t_values.len() >= k_max.min(4).saturating_sub(1);
            for (k, vals) in &ctx.t_values {
                let n = vals.len();
                let defect = (0..n / 2)
                    .map(|i| (vals[i] + vals[n - 1 - i]).abs())
                    .fold(0.0f64, f64::max);
                pass &= defect <= 1e-9;
                notes.push(format!("sym T{k} {defect:.1e}"));
            }
            for (k, vals) in &ctx.x_values {
                pass &= vals[0] >= -3.0 - 1e-8;
                notes.push(format!("min X{k} {:.6}", vals[0]));
            }
            for (k, ext) in &ctx.x_lanczos {
                pass &= ext.lambda_min >= -3.0 - 1e-8;
                notes.push(format!("min X{k} {:.6}", ext.lambda_min));
            }
            let mut chain = Vec::new();
            for k in 2..=ctx.pipe.cfg.k_max.min(4) {
                if let (Some(a), Some(b)) = (ctx.x_values.get(&(k - 1)), ctx.x_values.get(&k)) {
                    let ok = spectral::spectrum_containment(a, b, 1e-8);
                    pass &= ok;
                    chain.push(format!("X{} in X{}: {}", k - 1, k, ok));
                }
            }
            Ok((
                "symmetry, min >= -3, containment chain".into(),
                format!("{}; {}", notes.join(", "), chain.join(", ")),
                pass,
            ))
        },
    )
}

fn row07(ctx: &Ctx) -> Row {
    timed_row("AC07", "eigenvector lifting", "1e-6", || {
        let mut pass = true;
        let mut worst = 0.0f64;
        for k in 2..=ctx.pipe.cfg.k_max.min(3) {
            let lvl = ctx.level(k);
            let eig = dense_spectrum(&lvl.cay.graph, ctx.pipe.cfg.dense_cap)?;
            let mut kernel_dim = 0usize;
            for j in 0..lvl.cay.graph.n() {
                let f = eig.vector(j).unwrap();
                match spectral::lift_eigenvector(&lvl.t, lvl.nwhite, &f, eig.values[j], 1e-8)? {
                    spectral::LiftOutcome::Lifted {
                        residual_plus,
                        residual_minus,
                        ..
                    } => {
                        worst = worst.max(residual_plus).max(residual_minus);
                        pass &= residual_plus <= 1e-6 && residual_minus <= 1e-6;
                    }
                    spectral::LiftOutcome::KernelExtension {
                        max_triangle_sum,
                        is_eigenvector,
                        ..
                    } => {
                        kernel_dim += 1;
                        pass &= max_triangle_sum <= 1e-7 && is_eigenvector;
                    }
                }
            }
            // reverse direction: nonvanishing triangle sums must not extend
            let mut f = vec![0.0; lvl.nwhite];
            f[0] = 1.0;
            match spectral::lift_eigenvector(&lvl.t, lvl.nwhite, &f, -3.0, 1e-8)? {
                spectral::LiftOutcome::KernelExtension { is_eigenvector, .. } => {
                    pass &= !is_eigenvector;
                }
                _ => pass = false,
            }
            if let Some(tvals) = ctx.t_values.get(&k) {
                let zeros = tvals.iter().filter(|v| v.abs() <= 1e-7).count();
                pass &= zeros == 2 * kernel_dim;
            }
        }
        Ok((
            "all lifts below 1e-6; kernel criterion both ways".into(),
            format!("worst lift residual {worst:.2e}"),
            pass,
        ))
    })
}

fn row08(ctx: &Ctx) -> Row {
    timed_row("AC08", "surface combinatorics", "exact", || {
        let mut pass = true;
        let mut genera = Vec::new();
        for (k, r) in &ctx.reports {
            let nn = r.n_gens_log2 as u32;
            let n = r.gen_order_log2;
            pass &= r.vertices == 1 << (nn + 1)
                && r.edges == 3 << nn
                && r.faces == 3 << (nn - n)
                && r.face_length == 1 << (n + 1)
                && r.genus_consistent;
            genera.push((*k, r.genus));
        }
        let r2 = &ctx.reports[&2];
        pass &= (r2.faces, r2.face_length, r2.genus) == (24, 8, 5);
        Ok((
            "counts and genus match the closed forms; 24 octagons, genus 5 at k=2".into(),
            format!("genera {genera:?}"),
            pass,
        ))
    })
}

fn row09(ctx: &Ctx) -> Row {
    timed_row("AC09", "non-flatness 6g/|E|", "exact rationals", || {
        let r2 = &ctx.reports[&2];
        let base_ok = (r2.nonflat_num, r2.nonflat_den) == (5, 16);
        let ratios: Vec<(u64, u64)> = ctx
            .reports
            .iter()
            .filter(|(k, _)| (2..=5).contains(*k))
            .map(|(_, r)| (r.nonflat_num, r.nonflat_den))
            .collect();
        let increasing = ratios
            .windows(2)
            .all(|w| (w[0].0 as u128) * (w[1].1 as u128) < (w[1].0 as u128) * (w[0].1 as u128));
        Ok((
            "5/16 at k=2; strictly increasing k=2..5".into(),
            format!(
                "ratios {ratios:?}{}",
                if increasing {
                    String::new()
                } else {
                    "; not monotone: the ratio 1 - 3/2^n_k + 2/2^N_k dips whenever n_k \
                     stays constant while N_k grows (e.g. k=2 -> k=3)"
                    .to_string()
                }
            ),
            base_ok && increasing,
        ))
    })
}

fn row10(ctx: &Ctx) -> Row {
    timed_row("AC10", "Platonic counts and dualities", "exact", || {
        let mut pass = true;
        for n in 2..=24 {
            let g = platonic::build_platonic(n)?;
            pass &= g.n() as u64 == platonic::platonic_count(n)?;
        }
        pass &= platonic::psl2(8)?.len() == 192;
        let mut verdicts = Vec::new();
        for k in 1..=ctx.pipe.cfg.k_max.min(4) {
            let lvl = ctx.level(k);
            let report = &ctx.reports[&k];
            let dual = matching_dual(lvl, report)?;
            let v = platonic::duality_verdict(
                k,
                lvl.pcp.order_log2(),
                report.gen_order_log2,
                Some(&dual),
                true,
            )?;
            let expect_iso = k <= 2;
            pass &= v.isomorphic_to_some_platonic == expect_iso;
            if expect_iso {
                let w = v.witness.clone().ok_or_else(|| anyhow!("missing witness"))?;
                let pi = platonic::build_platonic(v.candidate_n)?;
                pass &= verify_mapping(&dual, &pi, &w);
            } else {
                pass &= v.direct_search_isomorphic == Some(false);
            }
            verdicts.push(format!("k={k}:{}", v.isomorphic_to_some_platonic));
        }
        Ok((
            "counts 2..24; Pi_4 ~ dual T_1, Pi_8 ~ dual T_2; refuted k=3,4; |PSL(2,Z_8)|=192".into(),
            verdicts.join(", "),
            pass,
        ))
    })
}

fn row11(ctx: &Ctx) -> Row {
    timed_row("AC11", "matrix-group cross-oracle", "exact", || {
        let n = 8;
        let [xm, ym, _] = platonic::xyz_matrices();
        let x = platonic::ProjMatrix::new(xm, n).unwrap();
        let y = platonic::ProjMatrix::new(ym, n).unwrap();
        let mut pass = tower_relators()
            .iter()
            .all(|r| platonic::eval_word_psl(r, x, y, n) == platonic::ProjMatrix::identity());
        let sub = platonic::xyz_subgroup()?;
        pass &= sub.order == 32 && sub.index == 6 && sub.normal;
        let lvl = ctx.level(2);
        match platonic::xyz_matches_cayley(&sub, &lvl.cay.graph, 0) {
            Some(w) => pass &= verify_mapping(&sub.cayley, &lvl.cay.graph, &w),
            None => pass = false,
        }
        Ok((
            "relators vanish; order 32, index 6, normal; labelled Cayley graph = X_2".into(),
            format!("pass = {pass}"),
            pass,
        ))
    })
}

fn row12(ctx: &Ctx) -> Row {
    timed_row("AC12", "geometry bounds", "1e-5 / 1e-6", || {
        let q = surface::quad_bound(std::f64::consts::PI / 4.0)?;
        let mut pass = (q.ell_lower - 1.12838).abs() <= 1e-5;
        for j in 2..=20 {
            let a = std::f64::consts::PI / (1u64 << j) as f64;
            pass &= surface::quad_bound(a)?.cheeger_ratio_lower > 0.25;
        }
        let sigma = 3.0 - lambda1_t(ctx, 2)?;
        let b = surface::surface_lambda_bounds(sigma);
        pass &= (b.lambda1_closed_lower - 0.0059563).abs() <= 1e-6;
        pass &= (b.lambda1_tube_lower - 2.0609e-4).abs() <= 1e-6;
        Ok((
            "l >= 1.12838; ratio > 1/4; lambda1 bounds 5.9563e-3 and 2.0609e-4".into(),
            format!(
                "l = {:.6}, lambda1 = {:.7}, lambda1-hat = {:.6e}",
                q.ell_lower, b.lambda1_closed_lower, b.lambda1_tube_lower
            ),
            pass,
        ))
    })
}

fn row13() -> Row {
    timed_row("AC13", "Toeplitz algebra oracle", "exact over F2", || {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        let mut pass = true;
        for trial in 0..200 {
            let k = 2 + trial % 7;
            let mk = |rng: &mut rand_chacha::ChaCha8Rng| {
                let d: Vec<toeplitz::BlockTriple> = (0..k)
                    .map(|_| toeplitz::BlockTriple(rng.gen::<u32>() & toeplitz::BlockTriple::MASK))
                    .collect();
                toeplitz::PeriodicMatrix::with_depth(0, &d, k)
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            pass &= a.multiply(&b)? == toeplitz::oracle::product(&a, &b, k);
        }
        let c = toeplitz::alpha_beta();
        pass &= c.alpha[1] == c.beta[1];
        pass &= toeplitz::leading_diagonal_of_square(c.alpha[0]) == c.beta[0];
        pass &= toeplitz::leading_diagonal_of_square(c.alpha[2]) == c.beta[2];
        Ok((
            "200 random products match the instantiated matrices; constants bit-exact".into(),
            format!("pass = {pass}"),
            pass,
        ))
    })
}
