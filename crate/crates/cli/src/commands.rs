use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use colposet::bundle::Bundle;
use colposet::coloured::{homology, ColouredPoset};
use colposet::khovanov::{
    fixed_crossing_homology, fixed_crossing_spectral_sequences, normalised_homology, parse_pd, unnormalised_homology,
    BigradedHomology, LinkDiagram,
};
use colposet::linalg::{CoeffRing, HomologySummary};
use colposet::poset::{is_admissible, is_specially_admissible, Poset};
use colposet::specseq::{base_supported, e2_direct, les_check, spectral_sequence, Bicomplex, CellJson, LesComplex};
use colposet_testkit::{selftest, SelftestConfig};
use serde_json::{json, Value};

use crate::config::{BundleCommand, KhovanovCommand, LesKind, PosetCommand, RunConfig};
use crate::output::Table;

/// A finished command: its report, and whether every check it made held.
pub struct Outcome {
    pub json: Value,
    pub table: Table,
    pub verified: bool,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn read_json(path: &Path) -> Result<(String, Value)> {
    let text = read(path)?;
    let value = serde_json::from_str(&text).with_context(|| format!("{} is not JSON", path.display()))?;
    Ok((text, value))
}

fn homology_table(h: &HomologySummary) -> Table {
    let mut t = Table::new(&["degree", "rank", "torsion"]);
    for d in &h.degrees {
        let torsion: Vec<String> = d.torsion.iter().map(|x| x.to_string()).collect();
        t.push(vec![d.degree.to_string(), d.rank.to_string(), torsion.join(" ")]);
    }
    t
}

pub fn poset(cmd: &PosetCommand, cfg: &RunConfig) -> Result<Outcome> {
    match cmd {
        PosetCommand::CheckAdmissible { path } => {
            let p = Poset::parse_json(&read(path)?)?;
            let admissible = is_admissible(&p);
            let special = is_specially_admissible(&p);
            let witness = admissible.as_ref().map(|c| c.witness.clone());
            let mut table = Table::new(&["admissible", "witness", "specially_admissible"]);
            table.push(vec![
                admissible.is_some().to_string(),
                witness.clone().unwrap_or_default(),
                special.is_some().to_string(),
            ]);
            let json = json!({
                "admissible": admissible.is_some(),
                "witness": witness,
                "specially_admissible": special.is_some(),
                "certificate": special,
            });
            Ok(Outcome { json, table, verified: true })
        }
        PosetCommand::Homology { path } => {
            let (text, value) = read_json(path)?;
            let ring = cfg.ring_for(&value)?;
            let cp = ColouredPoset::parse_json(&text, ring)?;
            let h = homology(&cp)?;
            Ok(Outcome { json: serde_json::to_value(&h)?, table: homology_table(&h), verified: true })
        }
    }
}

fn load_bundle(path: &Path, cfg: &RunConfig) -> Result<(Bundle, CoeffRing)> {
    let (text, value) = read_json(path)?;
    let ring = cfg.ring_for(&value)?;
    Ok((Bundle::parse_json(&text, ring)?, ring))
}

fn cells(m: impl IntoIterator<Item = ((usize, usize), usize)>) -> Vec<CellJson> {
    m.into_iter().filter(|&(_, dim)| dim > 0).map(|((p, q), dim)| CellJson { p, q, dim }).collect()
}

pub fn bundle(cmd: &BundleCommand, cfg: &RunConfig) -> Result<Outcome> {
    match cmd {
        BundleCommand::Total { path } => {
            let (xi, _) = load_bundle(path, cfg)?;
            let total = xi.total();
            let e = &total.total;
            let h = homology(e)?;
            let projection: serde_json::Map<String, Value> = (0..e.poset().len())
                .map(|z| (e.poset().label(z).to_string(), Value::from(xi.base().label(total.projection(z)))))
                .collect();
            let json = json!({ "total": e.to_json(), "projection": projection, "homology": h });
            Ok(Outcome { json, table: homology_table(&h), verified: true })
        }
        BundleCommand::Specseq { path } => {
            let (xi, ring) = load_bundle(path, cfg)?;
            if !ring.is_field() {
                bail!("spectral sequences need a field; use --ring q, f2 or fp:<p>");
            }
            let supported = base_supported(&xi);
            if !supported && !cfg.force_unsupported_base {
                bail!("the base is not specially admissible; pass --force-unsupported-base to compute anyway");
            }
            let n_max = cfg.max_degree + 1;
            let k = Bicomplex::new(&xi, n_max, false)?;
            let ss = spectral_sequence(&k, n_max, cfg.max_page.max(2))?;
            let direct = e2_direct(&xi, n_max)?;
            let e2 = ss.page(2).context("second page missing")?;
            let window = ss.window;
            let in_window = |&(p, q): &(usize, usize)| p + q <= window;
            let e2_matches = direct.iter().filter(|(c, _)| in_window(c)).all(|(&(p, q), &d)| e2.dim(p, q) == d);
            let h = homology(&xi.total().total)?;
            let mut degrees = Vec::new();
            let mut converges = true;
            for n in 0..=window {
                let (einf, target) = (ss.einf_total(n), h.rank(n));
                converges &= einf == target;
                degrees.push(json!({ "n": n, "einf_total": einf, "total_homology": target, "matches": einf == target }));
            }
            let mut table = Table::new(&["page", "p", "q", "dim"]);
            for page in ss.pages.iter().filter(|pg| pg.r <= cfg.max_page) {
                for (&(p, q), &d) in page.dims.iter().filter(|(_, &d)| d > 0) {
                    table.push(vec![page.r.to_string(), p.to_string(), q.to_string(), d.to_string()]);
                }
            }
            for (&(p, q), &d) in ss.einf.iter().filter(|(_, &d)| d > 0) {
                table.push(vec!["inf".into(), p.to_string(), q.to_string(), d.to_string()]);
            }
            let mut pages = ss.to_json();
            pages.pages.retain(|pg| pg.r <= cfg.max_page);
            let json = json!({
                "ring": ring.to_string(),
                "supported": supported,
                "pages": pages,
                "e2_direct": cells(direct.into_iter().filter(|(c, _)| in_window(c))),
                "e2_matches": e2_matches,
                "degrees": degrees,
                "converges": converges,
            });
            Ok(Outcome { json, table, verified: e2_matches && converges })
        }
        BundleCommand::LesCheck { path, coatom, complex } => {
            let (xi, _) = load_bundle(path, cfg)?;
            let base = xi.base();
            let coatoms = match coatom {
                Some(label) => vec![base.index_of(label).with_context(|| format!("no base element `{label}`"))?],
                None => base.coatoms(),
            };
            let which = match complex {
                LesKind::Total => LesComplex::Total,
                LesKind::Sequences => LesComplex::Sequences,
            };
            let reports = coatoms.into_iter().map(|x| les_check(&xi, x, cfg.max_degree, which)).collect::<Result<Vec<_>, _>>()?;
            let mut table = Table::new(&["coatom", "term", "n", "dim", "rank_in", "rank_out", "exact"]);
            for r in &reports {
                for p in &r.positions {
                    table.push(vec![
                        r.witness.clone(),
                        p.term.into(),
                        p.n.to_string(),
                        p.dim.to_string(),
                        p.rank_in.to_string(),
                        p.rank_out.to_string(),
                        p.exact.to_string(),
                    ]);
                }
            }
            let verified = reports.iter().all(|r| r.exact && r.quotient_matches);
            Ok(Outcome { json: json!({ "reports": reports, "exact": verified }), table, verified })
        }
    }
}

fn bigraded_rows(t: &mut Table, kind: &str, h: &BigradedHomology) {
    for c in h.to_json() {
        let torsion: Vec<String> = c.torsion.iter().map(|x| x.to_string()).collect();
        t.push(vec![kind.into(), c.i.to_string(), c.j.to_string(), c.rank.to_string(), torsion.join(" ")]);
    }
}

fn load_diagram(path: &Path) -> Result<LinkDiagram> {
    Ok(parse_pd(&read(path)?)?)
}

fn fixed_crossings(d: &LinkDiagram, cfg: &RunConfig) -> Result<Vec<usize>> {
    if cfg.fixed.is_empty() {
        bail!("--fixed is required");
    }
    if let Some(c) = cfg.fixed.iter().find(|&&c| c >= d.crossing_count()) {
        bail!("the diagram has {} crossings, no crossing {}", d.crossing_count(), c + 1);
    }
    Ok(cfg.fixed.clone())
}

pub fn khovanov(cmd: &KhovanovCommand, cfg: &RunConfig) -> Result<Outcome> {
    let ring = cfg.ring.unwrap_or(CoeffRing::Rationals);
    match cmd {
        KhovanovCommand::Homology { path } => {
            let d = load_diagram(path)?;
            let raw = unnormalised_homology(&d, ring)?;
            let norm = d.is_oriented().then(|| normalised_homology(&d, ring)).transpose()?;
            let mut table = Table::new(&["kind", "i", "j", "rank", "torsion"]);
            bigraded_rows(&mut table, "unnormalised", &raw);
            if let Some(n) = &norm {
                bigraded_rows(&mut table, "normalised", n);
            }
            let signs = d.sign_counts().map(|(p, m)| json!({ "positive": p, "negative": m }));
            let json = json!({
                "ring": ring.to_string(),
                "crossings": d.crossing_count(),
                "signs": signs,
                "total_rank": raw.total_rank(),
                "unnormalised": raw.to_json(),
                "normalised": norm.map(|n| n.to_json()),
            });
            Ok(Outcome { json, table, verified: true })
        }
        KhovanovCommand::Fixed { path } => {
            let d = load_diagram(path)?;
            let fixed = fixed_crossings(&d, cfg)?;
            let h = fixed_crossing_homology(&d, &fixed, ring)?;
            let mut table = Table::new(&["p", "h", "j", "dim"]);
            let mut rows = Vec::new();
            for (&(p, hh, j), &dim) in &h {
                table.push(vec![p.to_string(), hh.to_string(), j.to_string(), dim.to_string()]);
                rows.push(json!({ "p": p, "h": hh, "j": j, "dim": dim }));
            }
            let fixed1: Vec<usize> = fixed.iter().map(|c| c + 1).collect();
            let json = json!({ "ring": ring.to_string(), "fixed": fixed1, "cells": rows });
            Ok(Outcome { json, table, verified: true })
        }
        KhovanovCommand::Specseq { path } => {
            let d = load_diagram(path)?;
            let fixed = fixed_crossings(&d, cfg)?;
            let reports = fixed_crossing_spectral_sequences(&d, &fixed, ring)?;
            let mut table = Table::new(&["i", "e2_matches", "converges", "collapse_page"]);
            let mut out = Vec::new();
            for r in &reports {
                let collapse = r.pages.collapse_page();
                table.push(vec![
                    r.q_degree.to_string(),
                    r.e2_matches.to_string(),
                    r.converges.to_string(),
                    collapse.map(|c| c.to_string()).unwrap_or_default(),
                ]);
                let mut j = serde_json::to_value(r.to_json())?;
                j["fixed"] = json!(fixed.iter().map(|c| c + 1).collect::<Vec<_>>());
                j["pages"]["pages"]
                    .as_array_mut()
                    .expect("pages are a list")
                    .retain(|pg| pg["r"].as_u64().is_some_and(|r| r as usize <= cfg.max_page));
                j["collapse_page"] = json!(collapse);
                out.push(j);
            }
            let verified = reports.iter().all(|r| r.e2_matches && r.converges);
            Ok(Outcome { json: json!({ "ring": ring.to_string(), "q_degrees": out, "all_converge": verified }), table, verified })
        }
    }
}

pub fn run_selftest(cases: usize, cfg: &RunConfig) -> Result<Outcome> {
    let r = selftest(SelftestConfig { seed: cfg.seed, cases, max_degree: cfg.max_degree });
    let mut table = Table::new(&["property", "checked", "failed"]);
    for p in &r.properties {
        table.push(vec![p.name.clone(), p.checked.to_string(), p.failed.to_string()]);
    }
    Ok(Outcome { verified: r.passed, json: serde_json::to_value(&r)?, table })
}
