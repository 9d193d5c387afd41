//! Cached construction of the tower artifacts and the per-target spectrum
//! reports.

use crate::cache::{decode_graph, encode_graph, input_hash, Cache};
use crate::config::RunConfig;
use anyhow::{anyhow, bail, Context, Result};
use trivex::graph::{cayley, delta_y, relator_triangles, CayleyGraph, LabeledGraph};
use trivex::group::{pquotient, tower_presentation, PcPresentation, QuotientLimits};
use trivex::spectral::{
    dense_spectrum, extreme_eigenvalues, ramanujan_from_extremes, ramanujan_from_spectrum,
    spectral_gap, AdjacencyOperator, LanczosOptions, SpectrumReport,
};
use trivex::surface::{self, orient_tk, trace_faces, Turn};

/// Everything the pipeline knows about one class `k`.
pub struct Level {
    pub pcp: PcPresentation,
    pub cay: CayleyGraph,
    pub t: LabeledGraph,
    pub nwhite: usize,
}

pub struct Pipeline {
    pub cfg: RunConfig,
    cache: Cache,
    presentation_key: String,
}

impl Pipeline {
    pub fn new(cfg: RunConfig) -> Pipeline {
        let cache = Cache::new(&cfg.cache);
        let presentation_key =
            serde_json::to_string(&tower_presentation()).expect("serializable presentation");
        Pipeline {
            cfg,
            cache,
            presentation_key,
        }
    }

    pub fn pcp(&self, k: usize) -> Result<PcPresentation> {
        let key = input_hash(&["pcp", &self.presentation_key, &k.to_string()]);
        if let Some(bytes) = self.cache.load("pcp", &key) {
            if let Ok(text) = String::from_utf8(bytes) {
                if let Ok(pcp) = PcPresentation::from_json(&text) {
                    if pcp.class() == k {
                        return Ok(pcp);
                    }
                }
            }
        }
        let limits = QuotientLimits::default();
        let pcp = pquotient(&tower_presentation(), k, &limits)?;
        self.cache.store("pcp", &key, pcp.to_json().as_bytes());
        Ok(pcp)
    }

    pub fn level(&self, k: usize) -> Result<Level> {
        if k == 0 || k > 6 {
            bail!("k = {k} outside the supported range 1..=6");
        }
        let pcp = self.pcp(k)?;
        let xkey = input_hash(&["xgraph", &self.presentation_key, &k.to_string()]);
        let cay = match self
            .cache
            .load("xgraph", &xkey)
            .and_then(|b| decode_graph(&b))
            .filter(|g| g.n() == 1 << pcp.order_log2())
        {
            Some(graph) => CayleyGraph {
                elements: pcp.enumerate(self.cfg.enum_cap_log2)?,
                pcp: pcp.clone(),
                graph,
            },
            None => {
                let cay = cayley(&pcp, self.cfg.enum_cap_log2)?;
                self.cache.store("xgraph", &xkey, &encode_graph(&cay.graph));
                cay
            }
        };
        // structural validation: every vertex in 3 triangles, every edge in 1
        let triangles = relator_triangles(&cay)?;
        let tkey = input_hash(&["tgraph", &self.presentation_key, &k.to_string()]);
        let nwhite = cay.graph.n();
        let t = match self
            .cache
            .load("tgraph", &tkey)
            .and_then(|b| decode_graph(&b))
            .filter(|g| g.n() == 2 * nwhite)
        {
            Some(g) => g,
            None => {
                let t = delta_y(&cay.graph, &triangles)?;
                self.cache.store("tgraph", &tkey, &encode_graph(&t));
                t
            }
        };
        Ok(Level {
            pcp,
            cay,
            t,
            nwhite,
        })
    }

    pub fn surface_report(&self, k: usize) -> Result<surface::SurfaceReport> {
        let lvl = self.level(k)?;
        Ok(surface::surface_report(&lvl.pcp, &lvl.t, lvl.nwhite)?)
    }

    /// The dual of `T_k` under the face-length-matching turn convention.
    pub fn dual(&self, k: usize) -> Result<LabeledGraph> {
        let lvl = self.level(k)?;
        let report = surface::surface_report(&lvl.pcp, &lvl.t, lvl.nwhite)?;
        let map = orient_tk(&lvl.t, lvl.nwhite)?;
        let faces = [Turn::Left, Turn::Right]
            .into_iter()
            .map(|t| trace_faces(&map, t))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .find(|f| f.uniform_length() == Some(report.face_length))
            .ok_or_else(|| anyhow!("no turn convention matches the expected face length"))?;
        Ok(surface::dual_graph(&map, &faces)?)
    }

    /// Spectrum report for a target named `X<k>`, `T<k>`, `dual<k>` or
    /// `pi<N>`.
    pub fn spectrum(&self, target: &str) -> Result<SpectrumReport> {
        let t = target.to_ascii_lowercase();
        let (mut graph, name): (LabeledGraph, String) = if let Some(k) = t.strip_prefix('x') {
            let k: usize = k.parse().context("target X<k>")?;
            (self.level(k)?.cay.graph.clone(), format!("X{k}"))
        } else if let Some(k) = t.strip_prefix("dual") {
            let k: usize = k.parse().context("target dual<k>")?;
            (self.dual(k)?, format!("dual{k}"))
        } else if let Some(k) = t.strip_prefix('t') {
            let k: usize = k.parse().context("target T<k>")?;
            (self.level(k)?.t.clone(), format!("T{k}"))
        } else if let Some(n) = t.strip_prefix("pi") {
            let n: u64 = n.parse().context("target pi<N>")?;
            (trivex::platonic::build_platonic(n)?, format!("pi{n}"))
        } else {
            bail!("unknown spectrum target {target:?} (use X<k>, T<k>, dual<k>, pi<N>)");
        };
        let d = graph
            .is_regular()
            .ok_or_else(|| anyhow!("spectrum targets are regular graphs"))?;
        let n = graph.n();
        let bip = graph.compute_bipartition().map(|b| b.to_vec());
        if n <= self.cfg.dense_cap {
            let eig = dense_spectrum(&graph, self.cfg.dense_cap)?;
            let lambda1 = eig.values[n - 2];
            let vec1 = eig.vector(n - 2).unwrap();
            let (sigma, defect, _) = spectral_gap(&graph, lambda1, &vec1)?;
            Ok(SpectrumReport {
                graph: name,
                n,
                d,
                lambda1,
                lambda_min: eig.values[0],
                sigma,
                ramanujan: ramanujan_from_spectrum(&eig.values, d),
                method: "dense".into(),
                residual: defect,
                observed_c: lambda1,
                spectrum: Some(eig.values),
            })
        } else {
            let op = AdjacencyOperator::from_graph(&graph);
            let mut deflation = vec![vec![1.0; n]];
            if let Some(classes) = &bip {
                deflation.push(
                    classes
                        .iter()
                        .map(|&c| if c == 0 { 1.0 } else { -1.0 })
                        .collect(),
                );
            }
            let opts = LanczosOptions {
                max_iter: self.cfg.iter_cap,
                tol: 1e-8,
                seed: self.cfg.seed,
            };
            let ext = extreme_eigenvalues(&op, &deflation, &opts)?;
            let (sigma, defect, _) = spectral_gap(&graph, ext.lambda_max, &ext.vector_max)?;
            Ok(SpectrumReport {
                graph: name,
                n,
                d,
                lambda1: ext.lambda_max,
                lambda_min: ext.lambda_min,
                sigma,
                ramanujan: ramanujan_from_extremes(ext.lambda_max, ext.lambda_min, d),
                method: "lanczos".into(),
                residual: ext.residual_max.max(defect),
                observed_c: ext.lambda_max,
                spectrum: None,
            })
        }
    }
}
