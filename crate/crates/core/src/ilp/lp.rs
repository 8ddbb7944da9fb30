use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use super::{Constraint, IlpModel, Relation, VarKind, Variable};
use crate::Error;

/// Expression lines are wrapped before this many characters.
const LINE_WIDTH: usize = 78;

fn push_terms(out: &mut String, head: &str, terms: &[(usize, f64)], model: &IlpModel) {
    let mut line_start = out.len();
    out.push_str(head);
    if terms.is_empty() {
        out.push_str(" 0");
    }
    for (pos, &(i, coef)) in terms.iter().enumerate() {
        let sign = if coef < 0.0 { "-" } else { "+" };
        let mag = coef.abs();
        let mut piece = String::new();
        if pos > 0 || coef < 0.0 {
            piece.push(' ');
            piece.push_str(sign);
        }
        if mag != 1.0 {
            let _ = write!(piece, " {mag}");
        }
        let _ = write!(piece, " {}", model.variables[i].name);
        if out.len() - line_start + piece.len() > LINE_WIDTH {
            out.push_str("\n  ");
            line_start = out.len() - 2;
        }
        out.push_str(&piece);
    }
}

fn bound_line(v: &Variable) -> Option<String> {
    if v.kind == VarKind::Binary {
        return None;
    }
    let name = &v.name;
    match (v.lower, v.upper) {
        (0.0, None) => None,
        (lo, None) if lo == f64::NEG_INFINITY => Some(format!(" {name} free")),
        (lo, None) => Some(format!(" {name} >= {lo}")),
        (lo, Some(hi)) if lo == hi => Some(format!(" {name} = {lo}")),
        (lo, Some(hi)) if lo == f64::NEG_INFINITY => Some(format!(" -inf <= {name} <= {hi}")),
        (lo, Some(hi)) => Some(format!(" {lo} <= {name} <= {hi}")),
    }
}

/// CPLEX LP text for `model`, with sections in declaration order.
pub fn export_lp(model: &IlpModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "\\ {}", model.name);
    if model.variables.is_empty() && model.constraints.is_empty() {
        out.push_str("End\n");
        return out;
    }
    out.push_str("Minimize\n");
    push_terms(&mut out, " obj:", &model.objective, model);
    out.push_str("\nSubject To\n");
    let mut note: Option<&str> = None;
    for c in &model.constraints {
        if note != Some(c.note.as_str()) {
            let _ = writeln!(out, "\\ {}", c.note);
            note = Some(&c.note);
        }
        push_terms(&mut out, &format!(" {}:", c.name), &c.terms, model);
        let _ = writeln!(out, " {} {}", c.relation.symbol(), c.rhs);
    }
    let bounds: Vec<String> = model.variables.iter().filter_map(bound_line).collect();
    if !bounds.is_empty() {
        out.push_str("Bounds\n");
        for b in bounds {
            out.push_str(&b);
            out.push('\n');
        }
    }
    let binaries: Vec<&str> = model
        .variables
        .iter()
        .filter(|v| v.kind == VarKind::Binary)
        .map(|v| v.name.as_str())
        .collect();
    if !binaries.is_empty() {
        out.push_str("Binaries\n");
        let mut line = String::new();
        for name in binaries {
            if !line.is_empty() && line.len() + name.len() + 1 > LINE_WIDTH {
                out.push_str(&line);
                out.push('\n');
                line.clear();
            }
            line.push(' ');
            line.push_str(name);
        }
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str("End\n");
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Objective,
    Constraints,
    Bounds,
    Binaries,
    End,
}

fn section_of(line: &str) -> Option<Section> {
    match line.to_ascii_lowercase().as_str() {
        "minimize" | "minimise" | "min" => Some(Section::Objective),
        "subject to" | "such that" | "st" | "s.t." => Some(Section::Constraints),
        "bounds" => Some(Section::Bounds),
        "binaries" | "binary" | "bin" => Some(Section::Binaries),
        "end" => Some(Section::End),
        _ => None,
    }
}

fn number(tok: &str, line: usize) -> Result<f64, Error> {
    match tok {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        _ => tok
            .parse()
            .map_err(|_| Error::parse(line, format!("expected a number, found `{tok}`"))),
    }
}

fn is_number(tok: &str) -> bool {
    tok.parse::<f64>().is_ok()
}

fn relation(tok: &str) -> Option<Relation> {
    match tok {
        "<=" | "=<" | "<" => Some(Relation::Le),
        ">=" | "=>" | ">" => Some(Relation::Ge),
        "=" => Some(Relation::Eq),
        _ => None,
    }
}

struct Parser {
    model: IlpModel,
}

impl Parser {
    fn var(&mut self, name: &str) -> usize {
        match self.model.var_index(name) {
            Some(i) => i,
            None => self.model.add_var(Variable::continuous(name, 0.0, None)),
        }
    }

    /// Linear expression from whitespace-separated tokens.
    fn terms(&mut self, toks: &[&str], line: usize) -> Result<Vec<(usize, f64)>, Error> {
        let mut out = Vec::new();
        let mut sign = 1.0;
        let mut coef: Option<f64> = None;
        for &tok in toks {
            match tok {
                "+" => sign = 1.0,
                "-" => sign = -1.0,
                _ if is_number(tok) => coef = Some(number(tok, line)?),
                _ => {
                    let i = self.var(tok);
                    out.push((i, sign * coef.unwrap_or(1.0)));
                    sign = 1.0;
                    coef = None;
                }
            }
        }
        if coef.is_some_and(|c| c != 0.0) || sign < 0.0 {
            return Err(Error::parse(line, "dangling coefficient"));
        }
        Ok(out)
    }

    fn constraint(&mut self, text: &str, note: &str, line: usize) -> Result<(), Error> {
        let (name, body) = text
            .split_once(':')
            .ok_or_else(|| Error::parse(line, "constraint without a name"))?;
        let toks: Vec<&str> = body.split_whitespace().collect();
        let at = toks
            .iter()
            .position(|t| relation(t).is_some())
            .ok_or_else(|| Error::parse(line, "constraint without a relation"))?;
        if at + 2 != toks.len() {
            return Err(Error::parse(line, "expected a single right-hand side"));
        }
        let terms = self.terms(&toks[..at], line)?;
        let rel = relation(toks[at]).unwrap_or(Relation::Eq);
        let rhs = number(toks[at + 1], line)?;
        self.model.constraints.push(Constraint {
            name: name.trim().to_string(),
            terms,
            relation: rel,
            rhs,
            note: note.to_string(),
        });
        Ok(())
    }

    fn bound(&mut self, text: &str, line: usize) -> Result<(), Error> {
        let toks: Vec<&str> = text.split_whitespace().collect();
        let bad = || Error::parse(line, format!("unsupported bound `{text}`"));
        match toks.as_slice() {
            [name, "free"] => {
                let i = self.var(name);
                self.model.variables[i].lower = f64::NEG_INFINITY;
                self.model.variables[i].upper = None;
            }
            [lo, "<=", name, "<=", hi] => {
                let (lo, hi) = (number(lo, line)?, number(hi, line)?);
                let i = self.var(name);
                self.model.variables[i].lower = lo;
                self.model.variables[i].upper = (hi != f64::INFINITY).then_some(hi);
            }
            [name, op, val] if relation(op).is_some() && !is_number(name) => {
                let val = number(val, line)?;
                let i = self.var(name);
                let v = &mut self.model.variables[i];
                match relation(op).ok_or_else(bad)? {
                    Relation::Le => v.upper = (val != f64::INFINITY).then_some(val),
                    Relation::Ge => v.lower = val,
                    Relation::Eq => {
                        v.lower = val;
                        v.upper = Some(val);
                    }
                }
            }
            _ => return Err(bad()),
        }
        Ok(())
    }
}

/// Reads the subset of CPLEX LP written by [`export_lp`]: one minimisation
/// objective, named constraints, simple bounds and a binaries section.
///
/// Comment lines inside the constraint section become the `note` of the
/// constraints that follow; the first comment before any section is the
/// model name. Variables are declared in order of first appearance.
pub fn parse_lp(text: &str) -> Result<IlpModel, Error> {
    let mut p = Parser {
        model: IlpModel::default(),
    };
    let mut section = Section::Header;
    let mut note = String::new();
    let mut pending = String::new();
    let mut pending_line = 0;
    let mut objective = String::new();
    let mut named = false;

    let flush =
        |p: &mut Parser, pending: &mut String, note: &str, line: usize| -> Result<(), Error> {
            if !pending.trim().is_empty() {
                p.constraint(pending, note, line)?;
            }
            pending.clear();
            Ok(())
        };

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('\\') {
            let comment = comment.strip_prefix(' ').unwrap_or(comment);
            match section {
                Section::Header if !named => {
                    p.model.name = comment.to_string();
                    named = true;
                }
                Section::Constraints => {
                    flush(&mut p, &mut pending, &note, pending_line)?;
                    note = comment.to_string();
                }
                _ => {}
            }
            continue;
        }
        if let Some(next) = section_of(trimmed) {
            if section == Section::Constraints {
                flush(&mut p, &mut pending, &note, pending_line)?;
            }
            if section == Section::Objective {
                let body = objective
                    .split_once(':')
                    .map_or(objective.as_str(), |(_, b)| b);
                let toks: Vec<&str> = body.split_whitespace().collect();
                p.model.objective = p.terms(&toks, line)?;
            }
            section = next;
            continue;
        }
        match section {
            Section::Header => return Err(Error::parse(line, "content before the first section")),
            Section::Objective => {
                objective.push(' ');
                objective.push_str(trimmed);
            }
            Section::Constraints => {
                // A new constraint starts with `name:`; anything else continues the last one.
                let starts = trimmed
                    .split_whitespace()
                    .next()
                    .is_some_and(|t| t.contains(':'));
                if starts {
                    flush(&mut p, &mut pending, &note, pending_line)?;
                    pending_line = line;
                }
                pending.push(' ');
                pending.push_str(trimmed);
            }
            Section::Bounds => p.bound(trimmed, line)?,
            Section::Binaries => {
                for name in trimmed.split_whitespace() {
                    let i = p.var(name);
                    p.model.variables[i] = Variable::binary(name);
                }
            }
            Section::End => return Err(Error::parse(line, "content after End")),
        }
    }
    if section != Section::End {
        return Err(Error::parse(text.lines().count(), "missing End"));
    }
    Ok(p.model)
}
