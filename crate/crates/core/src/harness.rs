//! Run configuration, suite orchestration, JSON-lines reports and export.

use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::canon::iso_oracle_sweep;
use crate::construct::{build_t, min_radius, spine_recovered, verify_nonisomorphism, verify_tball, Registry};
use crate::error::{Error, Result};
use crate::gadget::{gadget_table, GadgetSpec};
use crate::poset::{corrupted_overlay_detected, monoid_equality_check, order_gadget, MonoidDomain};
use crate::ray::{build_ray, centred_shift_embeds, gadget_centred_embeds, gadget_shift_embeds, Variant};
use crate::report::{Report, Violation};
use crate::rtree::{build_rball, lab_check, sweep_colpreserv, verify_spin_lemmas, verify_unisign};
use crate::similarity::{
    all_fingerprint_maps, build_similarity, check_similarity_properties, embedding_induces_similarity, fingerprint,
    mirrored, translation, verify_embfinite, witness_embeddings,
};
use crate::spine::{build_spine, degree_census, verify_global_lemmas, Truncation};
use crate::tree::{Address, DecoratedTree};

pub const SUITES: [&str; 12] = [
    "colour-lemma",
    "embfinite",
    "gadget-table",
    "global-lemmas",
    "iso-oracle",
    "label-reconstruct",
    "main-lemma",
    "noniso",
    "poset-monoid",
    "ray-centres",
    "similarity-unique",
    "spin-lemmas",
];

/// Environment variable bounding the worker pool.
pub const WORKERS_ENV: &str = "TREESIB_WORKERS";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub sib_count: u32,
    pub stage: u32,
    pub radius: usize,
    pub maxlabel: u32,
    /// JSON registry file; the pinned 𝔰 = 3 registry when absent.
    pub registry: Option<PathBuf>,
    pub suites: Vec<String>,
    pub seed: u64,
    #[serde(skip)]
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::for_stage(1)
    }
}

impl RunConfig {
    pub fn for_stage(stage: u32) -> Self {
        RunConfig {
            sib_count: 3,
            stage,
            radius: min_radius(stage),
            maxlabel: stage + 1,
            registry: None,
            suites: SUITES.iter().map(|s| s.to_string()).collect(),
            seed: 0,
            out: PathBuf::from("out"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.sib_count < 1 {
            return Err(Error::Config("𝔰 must be at least 1".into()));
        }
        let need = min_radius(self.stage);
        if self.radius < need {
            return Err(Error::Config(format!("radius {} below the minimum {need} for stage {}", self.radius, self.stage)));
        }
        Ok(())
    }

    /// SHA-256 of the serialized config; the output directory is excluded.
    pub fn hash(&self) -> String {
        let body = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&body).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn truncation(&self) -> Truncation {
        Truncation { radius: self.radius, maxlabel: self.maxlabel }
    }

    pub fn load_registry(&self) -> Result<Registry> {
        let reg = match &self.registry {
            Some(p) => Registry::load(p)?,
            None => Registry::frozen(),
        };
        if reg.sib_count != self.sib_count {
            return Err(Error::Config(format!("registry is for 𝔰 = {}, config asks {}", reg.sib_count, self.sib_count)));
        }
        reg.require_upto(self.stage)?;
        Ok(reg)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub config_hash: String,
    pub cases: u64,
    pub violations: Vec<Violation>,
    pub notes: Vec<(String, String)>,
    /// Kept out of the report body.
    #[serde(skip)]
    pub wall_ms: u128,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> String {
        format!(
            "{:<18} {} cases={} violations={} ({} ms)",
            self.suite,
            if self.passed() { "PASS" } else { "FAIL" },
            self.cases,
            self.violations.len(),
            self.wall_ms
        )
    }
}

/// One JSON object per line, sorted by suite name. No timings.
pub fn report_body(reports: &[SuiteReport]) -> Result<String> {
    let mut sorted: Vec<&SuiteReport> = reports.iter().collect();
    sorted.sort_by(|a, b| a.suite.cmp(&b.suite));
    let mut out = String::new();
    for r in sorted {
        out.push_str(&serde_json::to_string(r)?);
        out.push('\n');
    }
    Ok(out)
}

pub fn run_suite(cfg: &RunConfig, name: &str) -> Result<SuiteReport> {
    cfg.validate()?;
    let start = Instant::now();
    let rep = match name {
        "gadget-table" => gadget_table(12, 4)?,
        "iso-oracle" => iso_oracle_sweep(8, 200, cfg.seed)?,
        "label-reconstruct" => lab_check(&build_rball(8, 8, false)?),
        "colour-lemma" => sweep_colpreserv(&build_rball(6, 6, false)?)?,
        "spin-lemmas" => spin_suite()?,
        "global-lemmas" => global_suite(cfg)?,
        "ray-centres" => ray_suite(8)?,
        "noniso" => noniso_suite(cfg)?,
        "similarity-unique" => similarity_suite(cfg)?,
        "main-lemma" => main_suite(cfg)?,
        "embfinite" => embfinite_suite(cfg)?,
        "poset-monoid" => poset_suite()?,
        _ => return Err(Error::UnknownSuite(name.to_string())),
    };
    Ok(SuiteReport {
        suite: name.to_string(),
        config_hash: cfg.hash(),
        cases: rep.cases,
        violations: rep.violations,
        notes: rep.notes,
        wall_ms: start.elapsed().as_millis(),
    })
}

/// Worker count from the environment, defaulting to the machine's.
pub fn workers() -> usize {
    std::env::var(WORKERS_ENV).ok().and_then(|v| v.parse().ok()).filter(|&n| n > 0).unwrap_or(0)
}

/// Run every suite in `cfg.suites` on a bounded pool; sorted by name.
pub fn run_suites(cfg: &RunConfig) -> Result<Vec<SuiteReport>> {
    cfg.validate()?;
    for s in &cfg.suites {
        if !SUITES.contains(&s.as_str()) {
            return Err(Error::UnknownSuite(s.clone()));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers())
        .build()
        .map_err(|e| Error::Config(e.to_string()))?;
    let mut out: Vec<SuiteReport> = pool.install(|| cfg.suites.par_iter().map(|s| run_suite(cfg, s)).collect::<Result<_>>())?;
    out.sort_by(|a, b| a.suite.cmp(&b.suite));
    Ok(out)
}

fn spin_suite() -> Result<Report> {
    let mut rep = verify_spin_lemmas(&build_rball(6, 6, false)?)?;
    rep.merge(verify_unisign(&build_rball(8, 8, false)?, 3)?);
    Ok(rep)
}

fn global_suite(cfg: &RunConfig) -> Result<Report> {
    let reg = cfg.load_registry()?;
    let tb = build_t(0, cfg.stage, cfg.truncation(), &reg)?;
    let sb = &tb.spine;
    let tv = sb.interior_tree_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let sample: Vec<(usize, usize)> = (0..24)
        .map(|_| (*tv.choose(&mut rng).expect("tree vertices"), *tv.choose(&mut rng).expect("tree vertices")))
        .collect();
    let mut rep = verify_global_lemmas(sb, &sample)?;
    rep.merge(degree_census(&tb.tree, |v| sb.is_interior(v)));
    Ok(rep)
}

fn ray_suite(h: i64) -> Result<Report> {
    let mut rep = Report::new();
    for s in 0..3u32 {
        for s2 in (0..3u32).filter(|&x| x != s) {
            let at = || vec![format!("z_{s} -> z_{s2}")];
            let bits = centred_shift_embeds(s, s2, h)?;
            rep.expect(!bits.centred, "centred-shift-bit", at, || "type monotone".into());
            rep.expect(!gadget_centred_embeds(s, s2, h)?, "centred-shift-gadget", at, || "engine embeds".into());
            // ordered pairs cover both directions of the siblinghood
            let shift = bits.valid_shifts.iter().copied().find(|&t| t != 0);
            let gadget = match shift {
                Some(t) => gadget_shift_embeds(s, s2, t, h)?.is_some(),
                None => false,
            };
            rep.expect(gadget, "non-centred-shift", at, || format!("first non-centred shift {shift:?}"));
            rep.note(&format!("shifts-{s}-{s2}"), format!("{:?}", bits.valid_shifts));
        }
    }
    Ok(rep)
}

fn noniso_suite(cfg: &RunConfig) -> Result<Report> {
    let reg = cfg.load_registry()?;
    let mut rep = Report::new();
    for k in 0..=cfg.stage {
        let tr = Truncation::for_stage(k, cfg.radius);
        rep.merge(verify_nonisomorphism(k, tr, &reg)?);
        for s in 0..cfg.sib_count {
            let tb = build_t(s, k, tr, &reg)?;
            rep.merge(verify_tball(&tb)?);
            rep.expect(spine_recovered(&tb)?, "spine-recovery", || vec![format!("T_{s}({k})")], || "stripped tree differs from the spine".into());
        }
    }
    Ok(rep)
}

/// Ten anchored pairs of amalgamated vertices whose radius-4 balls are
/// interior, on a spine two steps wider than the configured radius.
fn similarity_suite(cfg: &RunConfig) -> Result<Report> {
    let sb = build_spine(cfg.stage, Truncation { radius: cfg.radius + 2, maxlabel: cfg.maxlabel })?;
    let cands: Vec<usize> = (0..sb.tree.len()).filter(|&v| sb.is_amalgamated(v) && sb.ball_is_interior(v, 4)).collect();
    if cands.len() < 2 {
        return Err(Error::Config("too few amalgamated vertices for similarity pairs".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut rep = Report::new();
    rep.note("candidates", cands.len());
    for _ in 0..10 {
        let (u, v) = (*cands.choose(&mut rng).expect("nonempty"), *cands.choose(&mut rng).expect("nonempty"));
        let phi = build_similarity(&sb, u, v)?;
        rep.merge(check_similarity_properties(&sb, &phi)?);
        let maps = all_fingerprint_maps(&sb, u, v, 4, 16)?;
        rep.expect(maps.len() == 1, "unique-fingerprint-map", || vec![sb.addr(u), sb.addr(v)], || format!("{} maps", maps.len()));
    }
    Ok(rep)
}

fn witness_pair(cfg: &RunConfig, k: u32) -> Result<(crate::construct::TBall, crate::construct::TBall)> {
    let reg = cfg.load_registry()?;
    let guest = build_t(0, k, Truncation::for_stage(k, cfg.radius), &reg)?;
    let host = build_t(0, k, Truncation::for_stage(k, cfg.radius + 3), &reg)?;
    Ok((guest, host))
}

/// Merge with notes prefixed by the witness name.
fn absorb(rep: &mut Report, prefix: &str, r: Report) {
    rep.note(&format!("{prefix}-violations"), r.violations.len());
    for (key, val) in &r.notes {
        rep.note(&format!("{prefix}-{key}"), val);
    }
    rep.cases += r.cases;
    rep.violations.extend(r.violations);
}

fn main_suite(cfg: &RunConfig) -> Result<Report> {
    let mut rep = Report::new();
    for k in 0..=cfg.stage {
        let (g, h) = witness_pair(cfg, k)?;
        for (name, phi) in witness_embeddings(&g, &h)? {
            absorb(&mut rep, &format!("k{k}-{name}"), embedding_induces_similarity(&g, &h, &phi)?);
        }
        // a mirrored copy keeps T(0) invariant, so the control needs k ≥ 1
        if k >= 1 {
            let bad = mirrored(&translation(&g, &h, 0)?, &g, 1);
            let flagged = embedding_induces_similarity(&g, &h, &bad)?.violations.len();
            rep.note(&format!("k{k}-control"), flagged);
            rep.expect(flagged > 0, "negative-control", || vec![format!("T(0)@{k} mirrored at v_1")], || "not flagged".into());
        }
    }
    Ok(rep)
}

fn embfinite_suite(cfg: &RunConfig) -> Result<Report> {
    let mut rep = Report::new();
    for k in 0..=cfg.stage {
        let (g, h) = witness_pair(cfg, k)?;
        for (name, phi) in witness_embeddings(&g, &h)? {
            absorb(&mut rep, &format!("k{k}-{name}"), verify_embfinite(&g, &h, &phi)?);
        }
    }
    Ok(rep)
}

fn poset_suite() -> Result<Report> {
    let mut rep = monoid_equality_check(MonoidDomain::Gadgets)?;
    rep.merge(monoid_equality_check(MonoidDomain::RayWindows { halfwidth: 8 })?);
    rep.merge(monoid_equality_check(MonoidDomain::RBall { radius: 5 })?);
    rep.expect(corrupted_overlay_detected()?, "negative-control", Vec::new, || "corrupted overlay not detected".into());
    Ok(rep)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Format {
    Dot,
    Json,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dot" => Ok(Format::Dot),
            "json" => Ok(Format::Json),
            _ => Err(Error::Config(format!("unknown format `{s}`"))),
        }
    }
}

fn with_hash(cfg: &RunConfig, key: &str, value: serde_json::Value) -> Result<String> {
    let mut m = serde_json::Map::new();
    m.insert("config_hash".into(), cfg.hash().into());
    m.insert(key.into(), value);
    Ok(serde_json::to_string_pretty(&m)? + "\n")
}

fn tree_json(cfg: &RunConfig, t: &DecoratedTree) -> Result<String> {
    with_hash(cfg, "tree", serde_json::from_str(&t.to_json()?)?)
}

fn dot(cfg: &RunConfig, body: String) -> String {
    format!("// config {}\n{body}", cfg.hash())
}

/// Text of an exported object. Ids: `t:<s>`, `spine`, `rball`, `ray:<s>`,
/// `registry`, `poset-gadget:<n>:<m>`, `fingerprint:<u>:<v>` (addresses).
/// Fingerprints are written as their ASCII form in either format.
pub fn export_text(cfg: &RunConfig, object: &str, format: Format) -> Result<String> {
    cfg.validate()?;
    let unknown = || Error::UnknownObject(object.to_string());
    let parts: Vec<&str> = object.split(':').collect();
    let num = |s: &str| s.parse::<u32>().map_err(|_| unknown());
    match (parts.as_slice(), format) {
        (["t", s], f) => {
            let tb = build_t(num(s)?, cfg.stage, cfg.truncation(), &cfg.load_registry()?)?;
            match f {
                Format::Dot => Ok(dot(cfg, tb.dot_with_craters()?)),
                Format::Json => tree_json(cfg, &tb.tree),
            }
        }
        (["spine"], f) => {
            let sb = build_spine(cfg.stage, cfg.truncation())?;
            match f {
                Format::Dot => Ok(dot(cfg, sb.tree.to_dot("spine"))),
                Format::Json => tree_json(cfg, &sb.tree),
            }
        }
        (["rball"], f) => {
            let ball = build_rball(cfg.radius, cfg.radius as u32, true)?;
            match f {
                Format::Dot => Ok(dot(cfg, ball.tree.to_dot("rball"))),
                Format::Json => tree_json(cfg, &ball.tree),
            }
        }
        (["ray", s], f) => {
            let h = cfg.radius as i64;
            let w = build_ray(num(s)?, -h, h, Variant::Standard)?;
            match f {
                Format::Dot => Ok(dot(cfg, w.tree.to_dot(&format!("ray{s}")))),
                Format::Json => tree_json(cfg, &w.tree),
            }
        }
        (["registry"], Format::Json) => with_hash(cfg, "registry", serde_json::to_value(cfg.load_registry()?)?),
        (["poset-gadget", n, m], f) => {
            let o = order_gadget(GadgetSpec::plain(num(n)?, num(m)?))?;
            match f {
                Format::Dot => Ok(dot(cfg, o.to_dot(&format!("PK{n}_{m}")))),
                Format::Json => with_hash(
                    cfg,
                    "poset",
                    serde_json::json!({ "tree": serde_json::from_str::<serde_json::Value>(&o.base.to_json()?)?, "covers": o.covers }),
                ),
            }
        }
        (["fingerprint", u, v], _) => {
            let sb = build_spine(cfg.stage, cfg.truncation())?;
            let find = |a: &str| -> Result<usize> {
                let addr: Address = a.parse()?;
                sb.lookup(&addr).ok_or_else(|| Error::UnknownObject(format!("no vertex at {a}")))
            };
            Ok(format!("# config {}\n{}\n", cfg.hash(), fingerprint(&sb, find(u)?, find(v)?)?))
        }
        _ => Err(unknown()),
    }
}

fn file_name(object: &str, format: Format) -> String {
    let stem: String = object.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' }).collect();
    let ext = if object.starts_with("fingerprint:") {
        "txt"
    } else {
        match format {
            Format::Dot => "dot",
            Format::Json => "json",
        }
    };
    format!("{stem}.{ext}")
}

/// Write an exported object under `cfg.out` and return the path.
pub fn export(cfg: &RunConfig, object: &str, format: Format) -> Result<PathBuf> {
    let text = export_text(cfg, object, format)?;
    std::fs::create_dir_all(&cfg.out)?;
    let path = cfg.out.join(file_name(object, format));
    std::fs::write(&path, text)?;
    Ok(path)
}

/// Read back a tree written by [`export`] in JSON.
pub fn import_tree(path: &Path) -> Result<DecoratedTree> {
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path)?)?;
    let tree = v.get("tree").ok_or_else(|| Error::Io("no tree in export".into()))?;
    DecoratedTree::from_json(&tree.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bogus_suite() {
        assert_eq!(run_suite(&RunConfig::default(), "bogus").unwrap_err(), Error::UnknownSuite("bogus".into()));
    }

    #[test]
    fn small_radius_rejected() {
        let cfg = RunConfig { radius: 3, ..RunConfig::default() };
        assert!(matches!(cfg.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn hash_ignores_output_dir() {
        let a = RunConfig::default();
        let b = RunConfig { out: PathBuf::from("elsewhere"), ..a.clone() };
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), RunConfig { seed: 1, ..a.clone() }.hash());
    }

    #[test]
    fn unknown_object() {
        assert!(matches!(export_text(&RunConfig::default(), "nope", Format::Dot), Err(Error::UnknownObject(_))));
    }
}
