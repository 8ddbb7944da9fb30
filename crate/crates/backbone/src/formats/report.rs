//! Line-oriented text report of a construction run.
//!
//! One `round<i>` line per executed round with the sorted members of the
//! set after that round, a `shed` line when round 4 dropped members, then
//! `achieved_m`, `achieved_k`, `color_events` and `max_node_cost`. A failed
//! run appends `status <error-name>`.

use std::fmt::Write;

use backbone_core::bee::BeeResult;

pub fn render_report(result: &BeeResult, failure: Option<&backbone_core::Error>) -> String {
    let mut out = String::new();
    for (round, set) in &result.snapshots {
        let _ = write!(out, "round{round}");
        for v in set {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    if !result.shed.is_empty() {
        out.push_str("shed");
        for v in &result.shed {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "achieved_m {}", result.achieved_m);
    let _ = writeln!(out, "achieved_k {}", result.achieved_k);
    let _ = writeln!(out, "color_events {}", result.color_events);
    let _ = writeln!(out, "max_node_cost {}", result.max_node_cost);
    if let Some(e) = failure {
        let _ = writeln!(out, "status {}", e.name());
    }
    out
}
