//! Per-edge privacy budget accounting.
//!
//! Protocol runs charge every step's spend against the edges it touches;
//! [`ledger_check`] then verifies that no edge's total exceeds the budget
//! of its assigned level. This turns the privacy proofs into something a
//! run can be audited against.

use std::collections::HashMap;
use std::io::Write;

use crate::error::{Error, Result};
use crate::privacy::policy::{Level, PrivacyPolicy};

/// Tolerance for floating-point budget sums.
pub const LEDGER_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug)]
pub struct BudgetLedger {
    edges: Vec<(u32, u32)>,
    index: HashMap<(u32, u32), usize>,
    entries: Vec<Vec<(&'static str, f64)>>,
}

impl BudgetLedger {
    /// Empty ledger covering exactly the policy's edges.
    pub fn for_policy(policy: &PrivacyPolicy) -> Self {
        let edges = policy.edges().to_vec();
        let index = edges
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i))
            .collect::<HashMap<_, _>>();
        let entries = vec![Vec::new(); edges.len()];
        BudgetLedger {
            edges,
            index,
            entries,
        }
    }

    /// Records that `step` consumed `amount` of edge `(u, v)`'s budget.
    pub fn charge(&mut self, u: u32, v: u32, step: &'static str, amount: f64) -> Result<()> {
        let key = (u.min(v), u.max(v));
        let idx = *self
            .index
            .get(&key)
            .ok_or(Error::UnknownLedgerEdge { u: key.0, v: key.1 })?;
        self.entries[idx].push((step, amount));
        Ok(())
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Total budget charged to edge `(u, v)`, if the ledger tracks it.
    pub fn total(&self, u: u32, v: u32) -> Option<f64> {
        let key = (u.min(v), u.max(v));
        self.index
            .get(&key)
            .map(|&i| self.entries[i].iter().map(|&(_, a)| a).sum())
    }

    pub fn entries(&self, u: u32, v: u32) -> Option<&[(&'static str, f64)]> {
        let key = (u.min(v), u.max(v));
        self.index.get(&key).map(|&i| self.entries[i].as_slice())
    }

    /// Dumps the ledger as CSV with columns `edge,step,consumed`.
    pub fn write_csv<W: Write>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "edge,step,consumed")?;
        for (edge, entries) in self.edges.iter().zip(&self.entries) {
            for (step, amount) in entries {
                writeln!(w, "{}-{},{step},{amount}", edge.0, edge.1)?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct LedgerViolation {
    pub edge: (u32, u32),
    pub level: Level,
    pub consumed: f64,
    pub allowed: f64,
}

#[derive(Clone, Debug)]
pub struct LedgerReport {
    pub edges_checked: usize,
    /// Edges whose total spend equals their budget within tolerance.
    pub tight_edges: usize,
    pub violations: Vec<LedgerViolation>,
}

impl LedgerReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies that every edge's charged total stays within the budget of
/// its level. The ledger must cover exactly the policy's edges.
pub fn ledger_check(ledger: &BudgetLedger, policy: &PrivacyPolicy) -> Result<LedgerReport> {
    if ledger.edges() != policy.edges() {
        return Err(Error::PolicyMismatch(
            "ledger and policy track different edge sets".into(),
        ));
    }
    let mut report = LedgerReport {
        edges_checked: 0,
        tight_edges: 0,
        violations: Vec::new(),
    };
    for ((u, v), level) in policy.edge_levels() {
        let consumed = ledger.total(u, v).unwrap_or(0.0);
        let allowed = policy.budget(level);
        report.edges_checked += 1;
        if consumed > allowed + LEDGER_TOLERANCE {
            report.violations.push(LedgerViolation {
                edge: (u, v),
                level,
                consumed,
                allowed,
            });
        } else if (consumed - allowed).abs() <= LEDGER_TOLERANCE {
            report.tight_edges += 1;
        }
    }
    Ok(report)
}
