use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;
use tn_core::graphs::{to_dot, validate, LabelledGraph};
use tn_core::lattice::{enumerate_roses, IntMatrix, RoseCoset};
use tn_core::morse::{
    completely_descending_complex, descending_edges, descending_link, descending_witness, homology, rank2_tree,
    HomologyGroup,
};
use tn_core::torelli::{verify_appendix_identity, verify_conjugation_formula, verify_magnus_conjugates};
use tn_core::toymodel::{square_window, toy_certificate, z_pq_cells, TorusClass};

use crate::report::{ReportBuilder, RunReport};
use crate::{CdlkArgs, DlkArgs, DlkCheck, ExportArgs, Rank2Args, RosesCmd, TorelliCmd, ToyCmd};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] tn_core::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid input: {0}")]
    Input(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(tn_core::Error::ImpossibleState(_)) => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Rank, `i`, `k`, `l`, words tried and failing words.
type ConjugationOutcome = (usize, usize, usize, usize, usize, Vec<Vec<i32>>);

/// Caps the rayon pool at `TORELLI_THREADS` workers when set.
pub fn configure_threads() -> Result<()> {
    let Ok(v) = std::env::var("TORELLI_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Input(format!("TORELLI_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Input(e.to_string()))
}

fn read_json(path: &Path) -> Result<Value> {
    Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
}

fn read_rose(path: &Path) -> Result<RoseCoset> {
    Ok(RoseCoset::new(&IntMatrix::from_json(&read_json(path)?)?)?)
}

/// Reduced words of length at most `max` in the letters `±j`, `j ≠ skip`.
fn reduced_words(n: usize, skip: usize, max: usize) -> Vec<Vec<i32>> {
    let letters: Vec<i32> = (1..=n as i32).filter(|&j| j as usize != skip).flat_map(|j| [j, -j]).collect();
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for w in &frontier {
            for &x in &letters {
                if w.last() != Some(&-x) {
                    let mut v: Vec<i32> = w.clone();
                    v.push(x);
                    next.push(v);
                }
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

pub fn torelli(cmd: TorelliCmd) -> Result<RunReport> {
    match cmd {
        TorelliCmd::VerifyAppendix { n } => {
            if n < 3 {
                return Err(CliError::Input(format!("rank must be at least 3, got {n}")));
            }
            let mut rep = ReportBuilder::new("torelli verify-appendix", json!({ "n": n }));
            for m in 3..=n {
                for l in 3..=m {
                    let ok = verify_appendix_identity(l, m)?;
                    rep.check(format!("delta12 K_2,{l},1 delta12^-1 identity, n={m}"), ok, None);
                }
            }
            Ok(rep.finish())
        }
        TorelliCmd::VerifyConjugation { n, hmax } => {
            if n < 3 {
                return Err(CliError::Input(format!("rank must be at least 3, got {n}")));
            }
            let mut rep = ReportBuilder::new("torelli verify-conjugation", json!({ "n": n, "hmax": hmax }));
            let mut cases = Vec::new();
            for m in 3..=n {
                for i in 1..=m {
                    for k in 1..=m {
                        for l in 1..=m {
                            if i != k && k != l && i != l {
                                cases.push((m, i, k, l));
                            }
                        }
                    }
                }
            }
            let results: Vec<ConjugationOutcome> = cases
                .par_iter()
                .map(|&(m, i, k, l)| {
                    let words = reduced_words(m, i, hmax);
                    let mut bad = Vec::new();
                    for h in &words {
                        if !verify_conjugation_formula(i, k, l, h, m)? {
                            bad.push(h.clone());
                        }
                    }
                    Ok((m, i, k, l, words.len(), bad))
                })
                .collect::<Result<_>>()?;
            for (m, i, k, l, count, bad) in results {
                let witness = (!bad.is_empty()).then(|| json!({ "h": bad }));
                rep.check(format!("K_{i},{k},{l} conjugated by {count} words, n={m}"), bad.is_empty(), witness);
            }
            Ok(rep.finish())
        }
        TorelliCmd::VerifyConjugates { n } => {
            let mut rep = ReportBuilder::new("torelli verify-conjugates", json!({ "n": n }));
            let cases = verify_magnus_conjugates(n)?;
            for c in &cases {
                rep.check(
                    format!("{} . {} . {}^-1", c.conjugator, c.generator, c.conjugator),
                    c.passed(),
                    Some(serde_json::to_value(&c.evidence)?),
                );
            }
            rep.data(serde_json::to_value(&cases)?);
            Ok(rep.finish())
        }
    }
}

pub fn roses(cmd: RosesCmd) -> Result<RunReport> {
    let RosesCmd::Enumerate { rank, bound, out } = cmd;
    if rank == 0 || bound < 0 {
        return Err(CliError::Input("rank must be positive and bound non-negative".into()));
    }
    let mut rep = ReportBuilder::new("roses enumerate", json!({ "rank": rank, "bound": bound }));
    let roses = enumerate_roses(rank, bound);
    let sorted = roses.windows(2).all(|w| w[0].norm() <= w[1].norm() && w[0] != w[1]);
    rep.check(format!("{} distinct cosets sorted by norm", roses.len()), sorted, None);
    let list = serde_json::to_value(&roses)?;
    if let Some(path) = out {
        fs::write(path, serde_json::to_string_pretty(&list)?)?;
    }
    rep.data(json!({ "count": roses.len(), "roses": list }));
    Ok(rep.finish())
}

fn top_trivial(h: &[HomologyGroup], rank: usize) -> bool {
    let top = (2 * rank).saturating_sub(5);
    h.iter().filter(|g| g.dim > top).all(HomologyGroup::is_trivial)
}

fn homology_json(h: &[HomologyGroup]) -> Value {
    h.iter()
        .map(|g| json!({ "dim": g.dim, "rank": g.rank, "torsion": g.torsion.iter().map(ToString::to_string).collect::<Vec<_>>() }))
        .collect()
}

struct RoseOutcome {
    passed: bool,
    row: Value,
}

fn examine_rose(rho: &RoseCoset, check: DlkCheck) -> Result<RoseOutcome> {
    let edges = descending_edges(rho)?;
    let mut row = json!({ "rose": rho, "descending_edges": edges.len() });
    let passed = match check {
        DlkCheck::Nonempty => {
            let w = descending_witness(rho)?;
            row["witness"] = serde_json::to_value(&w)?;
            w.is_some() != rho.is_identity()
        }
        DlkCheck::Connected => {
            if rho.is_identity() {
                row["connected"] = Value::Null;
                edges.is_empty()
            } else {
                let c = descending_link(rho)?.is_connected();
                row["connected"] = json!(c);
                c
            }
        }
        DlkCheck::Homology => {
            let x = completely_descending_complex(rho)?;
            if x.is_empty() {
                row["homology"] = json!([]);
                rho.is_identity()
            } else {
                let h = homology(&x)?;
                row["homology"] = homology_json(&h);
                x.dimension().is_some_and(|d| d <= 2 * rho.rank() - 4) && top_trivial(&h, rho.rank())
            }
        }
    };
    Ok(RoseOutcome { passed, row })
}

fn check_name(check: DlkCheck) -> &'static str {
    match check {
        DlkCheck::Nonempty => "descending link nonempty exactly off the identity",
        DlkCheck::Connected => "descending link connected",
        DlkCheck::Homology => "completely descending complex acyclic above its top degree",
    }
}

pub fn dlk(args: DlkArgs) -> Result<RunReport> {
    let (roses, params) = match (&args.matrix, args.rank, args.bound) {
        (Some(p), _, _) => (vec![read_rose(p)?], json!({ "matrix": p.display().to_string() })),
        (None, Some(r), Some(b)) => {
            if r < 2 || b < 0 {
                return Err(CliError::Input("rank must be at least 2 and bound non-negative".into()));
            }
            (enumerate_roses(r, b), json!({ "rank": r, "bound": b }))
        }
        _ => return Err(CliError::Input("pass --matrix or both --rank and --bound".into())),
    };
    let mut rep = ReportBuilder::new("dlk", params);
    let outcomes: Vec<RoseOutcome> = roses.par_iter().map(|r| examine_rose(r, args.check)).collect::<Result<_>>()?;
    let failed: Vec<Value> = outcomes.iter().filter(|o| !o.passed).map(|o| o.row["rose"].clone()).collect();
    let name = format!("{} ({} roses)", check_name(args.check), roses.len());
    let witness = (!failed.is_empty()).then(|| json!(failed));
    rep.check(name, failed.is_empty(), witness);
    rep.data(outcomes.into_iter().map(|o| o.row).collect());
    Ok(rep.finish())
}

pub fn cdlk(args: CdlkArgs) -> Result<RunReport> {
    let rho = read_rose(&args.matrix)?;
    let n = rho.rank();
    let mut rep = ReportBuilder::new("cdlk", json!({ "matrix": args.matrix.display().to_string() }));
    let x = completely_descending_complex(&rho)?;
    let h = if x.is_empty() { Vec::new() } else { homology(&x)? };
    rep.check(format!("cell dimensions at most {}", 2 * n - 4), x.dimension().is_none_or(|d| d <= 2 * n - 4), None);
    rep.check(format!("homology vanishes above degree {}", (2 * n).saturating_sub(5)), top_trivial(&h, n), None);
    rep.data(json!({
        "rose": rho,
        "f_vector": x.f_vector(),
        "euler_characteristic": x.euler_characteristic(),
        "homology": homology_json(&h),
    }));
    Ok(rep.finish())
}

pub fn rank2(args: Rank2Args) -> Result<RunReport> {
    if args.bound < 0 {
        return Err(CliError::Input("bound must be non-negative".into()));
    }
    let mut rep = ReportBuilder::new("rank2-tree", json!({ "bound": args.bound }));
    let t = rank2_tree(args.bound)?;
    rep.check("core is acyclic", t.core_acyclic, None);
    rep.check("core is connected", t.core_connected, None);
    rep.check("adjacent roses share one Farey fraction", t.farey_consistent, None);
    if let Some(path) = &args.dot {
        fs::write(path, t.to_dot())?;
    }
    rep.data(json!({
        "roses": t.roses.len(),
        "thetas": t.thetas.len(),
        "incidences": t.incidences.len(),
        "core": t.core.len(),
        "window_acyclic": t.acyclic,
        "window_connected": t.connected,
    }));
    Ok(rep.finish())
}

pub fn toy(cmd: ToyCmd) -> Result<RunReport> {
    let ToyCmd::Certify { rank, window } = cmd;
    if rank < 3 || window < 0 {
        return Err(CliError::Input("rank must be at least 3 and window non-negative".into()));
    }
    let mut rep = ReportBuilder::new("toy certify", json!({ "rank": rank, "window": window }));
    let w = square_window(window);
    let cert = toy_certificate(rank, &w)?;
    rep.check(format!("{} maximal-norm roses are distinct", cert.roses.len()), cert.injective, None);
    let mut rows = Vec::new();
    for ((pq, rose), s) in cert.window.iter().zip(&cert.roses).zip(&cert.spheres) {
        let torus = z_pq_cells(&TorusClass::new(pq.0, pq.1, 3)?)?;
        let closed = torus.is_closed_surface() && torus.euler_characteristic() == 0;
        rep.check(format!("torus {pq:?} is a closed surface"), closed, Some(json!(torus.f_vector())));
        let witness = (!s.passed()).then(|| json!(s.failures));
        rep.check(format!("sphere at {pq:?}"), s.passed(), witness);
        rows.push(json!({
            "pq": [pq.0, pq.1],
            "max_rose": rose,
            "sphere_ok": s.passed(),
            "cells": s.cells.iter().map(|c| json!({ "dim": c.dim, "graph": c.graph_key })).collect::<Vec<_>>(),
        }));
    }
    rep.check(
        format!("certified rank {} equals window size {}", cert.rank_certified, cert.window.len()),
        cert.rank_certified == cert.window.len(),
        None,
    );
    rep.data(json!({ "census": cert.census, "tori": rows }));
    Ok(rep.finish())
}

pub fn export(args: ExportArgs) -> Result<RunReport> {
    let g = LabelledGraph::from_json(&read_json(&args.input)?)?;
    let mut rep = ReportBuilder::new("export", json!({ "input": args.input.display().to_string() }));
    let v = validate(&g);
    let witness = v.violation.as_ref().map(|x| json!(format!("{x:?}")));
    rep.check("graph is a valid marked graph", v.violation.is_none(), witness);
    let dot = to_dot(&g);
    match &args.out {
        Some(path) => fs::write(path, &dot)?,
        None => rep.data(json!({ "dot": dot })),
    }
    Ok(rep.finish())
}
