//! Grid sweeps: classify every canonical spec in a parameter box and compare
//! with the oracle.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::cert::RoughCert;
use crate::classifier::classify_rough;
use crate::error::{Error, Result};
use crate::hierarchy::{HierSpec, Kind};
use crate::oracle::{oracle_class, verify_representation, Class, Mode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Grid {
    pub kind: Kind,
    pub levels: usize,
    pub nmax: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kmax: Option<u32>,
}

/// Every canonical spec in the grid, in lexicographic `(n, k)` order. All
/// thresholds respecting the ordering rules and `k_i <= n_1 + ... + n_i` are
/// generated, then filtered by the canonicity check.
pub fn grid_specs(grid: &Grid) -> Vec<HierSpec> {
    let mut out = Vec::new();
    if grid.levels == 0 || grid.nmax == 0 {
        return out;
    }
    let mut n = vec![1u32; grid.levels];
    loop {
        out.extend(canonical_specs(grid.kind, &n, grid.kmax));
        // Next n in lexicographic order.
        let mut i = grid.levels;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if n[i] < grid.nmax {
                n[i] += 1;
                for v in &mut n[i + 1..] {
                    *v = 1;
                }
                break;
            }
        }
    }
}

/// Canonical specs of `kind` over the level sizes `n`, thresholds in
/// lexicographic order.
pub fn canonical_specs(kind: Kind, n: &[u32], kmax: Option<u32>) -> Vec<HierSpec> {
    let mut out = Vec::new();
    let mut k = Vec::with_capacity(n.len());
    push_thresholds(kind, kmax, n, &mut k, &mut out);
    out
}

fn push_thresholds(
    kind: Kind,
    kmax: Option<u32>,
    n: &[u32],
    k: &mut Vec<u32>,
    out: &mut Vec<HierSpec>,
) {
    let i = k.len();
    let m = n.len();
    if i == m {
        if let Ok(spec) = HierSpec::new(kind, n.to_vec(), k.clone()) {
            if spec.canon_check().canonical {
                out.push(spec);
            }
        }
        return;
    }
    let prefix: u32 = n[..=i].iter().sum();
    let lo = match (i, kind) {
        (0, _) => 1,
        (_, Kind::Conjunctive) if i == m - 1 => k[i - 1],
        _ => k[i - 1] + 1,
    };
    let hi = kmax.map_or(prefix, |c| c.min(prefix));
    for t in lo..=hi {
        k.push(t);
        push_thresholds(kind, kmax, n, k, out);
        k.pop();
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CanonFlags {
    pub dummy_last_level: bool,
    pub passer_first_level: bool,
    pub blocker_first_level: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRecord {
    pub kind: Kind,
    pub n: Vec<u32>,
    pub k: Vec<u32>,
    pub flags: CanonFlags,
    pub class: Option<Class>,
    pub case: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sub_case: Option<String>,
    pub oracle_class: Option<Class>,
    pub agreement: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub literal_case_agrees: Option<bool>,
    /// Both witnesses, kept only when the verdicts disagree.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classifier_certificate: Option<RoughCert>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_certificate: Option<RoughCert>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub micros: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub total: usize,
    pub agreements: usize,
    pub disagreements: usize,
    pub skipped: usize,
    pub literal_mismatches: usize,
    pub by_class: BTreeMap<String, usize>,
    pub by_case: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepReport {
    pub grid: Grid,
    pub records: Vec<SweepRecord>,
    pub summary: Summary,
}

/// Classifier verdict, oracle verdict, and whether they match with a
/// certificate that checks out.
pub fn check_spec(spec: &HierSpec, timings: bool) -> SweepRecord {
    let start = Instant::now();
    let report = spec.canon_check();
    let mut rec = SweepRecord {
        kind: spec.kind(),
        n: spec.n().to_vec(),
        k: spec.k().to_vec(),
        flags: CanonFlags {
            dummy_last_level: report.dummy_last_level,
            passer_first_level: report.passer_first_level,
            blocker_first_level: report.blocker_first_level,
        },
        class: None,
        case: None,
        sub_case: None,
        oracle_class: None,
        agreement: false,
        literal_case_agrees: None,
        classifier_certificate: None,
        oracle_certificate: None,
        error: None,
        micros: None,
    };
    let outcome = (|| -> Result<()> {
        let verdict = classify_rough(spec)?;
        rec.class = Some(verdict.class);
        rec.case = Some(verdict.matched_case.clone());
        rec.sub_case = verdict.sub_case.clone();
        rec.literal_case_agrees = verdict.literal_case_agrees;
        let game = spec.realize()?;
        let (oclass, ocert) = oracle_class(&game)?;
        rec.oracle_class = Some(oclass);
        let sound = match &verdict.certificate {
            Some(c) => {
                let mode = if verdict.class == Class::Weighted {
                    Mode::Weighted
                } else {
                    Mode::Rough
                };
                verify_representation(&game, c, mode)?
            }
            None => true,
        };
        rec.agreement = sound && oclass == verdict.class;
        if !rec.agreement {
            rec.classifier_certificate = verdict.certificate;
            rec.oracle_certificate = ocert;
        }
        Ok(())
    })();
    if let Err(e) = outcome {
        rec.error = Some(e.to_string());
    }
    if timings {
        rec.micros = Some(start.elapsed().as_micros() as u64);
    }
    rec
}

pub fn run_sweep(grid: &Grid, timings: bool) -> SweepReport {
    let specs = grid_specs(grid);
    let records: Vec<SweepRecord> = specs.par_iter().map(|s| check_spec(s, timings)).collect();
    let mut summary = Summary {
        total: records.len(),
        ..Summary::default()
    };
    for r in &records {
        let skipped = r
            .error
            .as_deref()
            .is_some_and(|e| e.contains("exceeds the cap"));
        if skipped {
            summary.skipped += 1;
            continue;
        }
        if r.agreement {
            summary.agreements += 1;
        } else {
            summary.disagreements += 1;
        }
        if r.literal_case_agrees == Some(false) {
            summary.literal_mismatches += 1;
        }
        if let Some(c) = r.class {
            *summary.by_class.entry(c.to_string()).or_default() += 1;
        }
        if let Some(c) = &r.case {
            *summary.by_case.entry(c.clone()).or_default() += 1;
        }
    }
    SweepReport {
        grid: *grid,
        records,
        summary,
    }
}

impl SweepReport {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Document(e.to_string()))
    }

    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let opt = |c: &Option<Class>| c.map_or("-".to_string(), |c| c.to_string());
        let _ = writeln!(
            s,
            "{:<12} {:<16} {:<16} {:<20} {:<14} {:<20} ok",
            "kind", "n", "k", "class", "case", "oracle"
        );
        for r in &self.records {
            let _ = writeln!(
                s,
                "{:<12} {:<16} {:<16} {:<20} {:<14} {:<20} {}",
                r.kind.to_string(),
                format!("{:?}", r.n),
                format!("{:?}", r.k),
                opt(&r.class),
                r.case.as_deref().unwrap_or("-"),
                opt(&r.oracle_class),
                match (&r.error, r.agreement) {
                    (Some(e), _) => format!("ERROR {e}"),
                    (None, true) => "yes".into(),
                    (None, false) => "NO".into(),
                }
            );
        }
        let sm = &self.summary;
        let _ = writeln!(
            s,
            "\ntotal {} agree {} disagree {} skipped {} literal-mismatch {}",
            sm.total, sm.agreements, sm.disagreements, sm.skipped, sm.literal_mismatches
        );
        for (c, v) in &sm.by_case {
            let _ = writeln!(s, "  {c:<14} {v}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_canonical_and_ordered() {
        let g = Grid {
            kind: Kind::Disjunctive,
            levels: 2,
            nmax: 3,
            kmax: None,
        };
        let specs = grid_specs(&g);
        assert!(specs.iter().all(|s| s.canon_check().canonical));
        let mut sorted = specs.clone();
        sorted.sort_by(|a, b| (a.n(), a.k()).cmp(&(b.n(), b.k())));
        assert_eq!(specs, sorted);
        assert!(specs.contains(&HierSpec::disjunctive(vec![2, 2], vec![2, 3]).unwrap()));
    }

    #[test]
    fn small_sweep_agrees_and_is_deterministic() {
        let g = Grid {
            kind: Kind::Disjunctive,
            levels: 2,
            nmax: 4,
            kmax: None,
        };
        let a = run_sweep(&g, false);
        assert_eq!(a.summary.disagreements, 0, "{}", a.to_table());
        assert_eq!(a.to_json().unwrap(), run_sweep(&g, false).to_json().unwrap());
    }
}
