//! Integer programs for minimum backbones, written out as CPLEX LP text.
//!
//! Two formulations are provided: a spanning-tree model whose optimum is a
//! minimum connected dominating set, and an adjacency-count model for
//! m-connected k-dominating sets. No solver is embedded.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::graph::UdgGraph;
use crate::Error;

mod lp;

pub use lp::{export_lp, parse_lp};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    Binary,
    Continuous,
}

/// Decision variable. Binaries always range over `{0, 1}`; the bounds of a
/// continuous variable default to `[0, +inf)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: f64,
    pub upper: Option<f64>,
}

impl Variable {
    pub fn binary(name: impl Into<String>) -> Self {
        Variable {
            name: name.into(),
            kind: VarKind::Binary,
            lower: 0.0,
            upper: Some(1.0),
        }
    }

    pub fn continuous(name: impl Into<String>, lower: f64, upper: Option<f64>) -> Self {
        Variable {
            name: name.into(),
            kind: VarKind::Continuous,
            lower,
            upper,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }

    /// Whether `lhs rel rhs` holds up to `tol`.
    pub fn holds(self, lhs: f64, rhs: f64, tol: f64) -> bool {
        match self {
            Relation::Le => lhs <= rhs + tol,
            Relation::Ge => lhs >= rhs - tol,
            Relation::Eq => (lhs - rhs).abs() <= tol,
        }
    }
}

/// `Σ coef·var rel rhs`; terms refer to variables by index.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
    /// Describes the constraint family; emitted as an LP comment whenever it
    /// changes between consecutive constraints.
    pub note: String,
}

/// Minimisation problem over declared variables.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IlpModel {
    pub name: String,
    pub variables: Vec<Variable>,
    pub objective: Vec<(usize, f64)>,
    pub constraints: Vec<Constraint>,
}

impl IlpModel {
    pub fn new(name: impl Into<String>) -> Self {
        IlpModel {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn add_var(&mut self, v: Variable) -> usize {
        self.variables.push(v);
        self.variables.len() - 1
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(usize, f64)>,
        relation: Relation,
        rhs: f64,
        note: &str,
    ) {
        self.constraints.push(Constraint {
            name: name.into(),
            terms,
            relation,
            rhs,
            note: note.into(),
        });
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn binary_count(&self) -> usize {
        self.variables
            .iter()
            .filter(|v| v.kind == VarKind::Binary)
            .count()
    }

    /// Names are unique and every term references a declared variable.
    pub fn validate(&self) -> Result<(), Error> {
        let mut names = BTreeSet::new();
        for v in &self.variables {
            if !names.insert(v.name.as_str()) {
                return Err(Error::invalid(format!("duplicate variable {}", v.name)));
            }
        }
        let mut rows = BTreeSet::new();
        for c in &self.constraints {
            if !rows.insert(c.name.as_str()) {
                return Err(Error::invalid(format!("duplicate constraint {}", c.name)));
            }
        }
        let n = self.variables.len();
        let terms = self
            .objective
            .iter()
            .chain(self.constraints.iter().flat_map(|c| &c.terms));
        for &(i, coef) in terms {
            if i >= n {
                return Err(Error::invalid(format!(
                    "term references undeclared variable {i}"
                )));
            }
            if !coef.is_finite() {
                return Err(Error::invalid("coefficients must be finite"));
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[f64]) -> f64 {
        self.objective.iter().map(|&(i, c)| c * x[i]).sum()
    }

    /// Whether `x` satisfies bounds, integrality and every constraint.
    pub fn is_feasible(&self, x: &[f64], tol: f64) -> bool {
        let in_bounds = self.variables.iter().zip(x).all(|(v, &xi)| {
            let integral = v.kind == VarKind::Continuous || (xi - libm::round(xi)).abs() <= tol;
            integral && xi >= v.lower - tol && v.upper.is_none_or(|u| xi <= u + tol)
        });
        in_bounds
            && self.constraints.iter().all(|c| {
                let lhs: f64 = c.terms.iter().map(|&(i, a)| a * x[i]).sum();
                c.relation.holds(lhs, c.rhs, tol)
            })
    }
}

fn ones(vars: impl IntoIterator<Item = usize>, coef: f64) -> Vec<(usize, f64)> {
    vars.into_iter().map(|i| (i, coef)).collect()
}

/// Spanning-tree formulation of a minimum connected dominating set.
///
/// Node 0 roots a spanning tree whose edges are the `b_i_j`; only selected
/// nodes (`a_i = 1`) may have children, except that an unselected root may
/// have one child. Order variables `u_i` exclude cycles. The optimum of `c`
/// is the minimum CDS size when it does not exceed `cds_size_bound`.
pub fn build_cds_tree_model(g: &UdgGraph, cds_size_bound: usize) -> IlpModel {
    let n = g.len();
    let mut model = IlpModel::new(format!("cds_tree n={n} bound={cds_size_bound}"));
    if n == 0 {
        return model;
    }
    let nf = n as f64;
    let c = model.add_var(Variable::continuous("c", 0.0, None));
    let a: Vec<usize> = (0..n)
        .map(|i| model.add_var(Variable::binary(format!("a_{i}"))))
        .collect();
    let arcs: Vec<(usize, usize)> = g
        .nodes()
        .flat_map(|i| g.neighbors(i).iter().map(move |&j| (i, j)))
        .collect();
    let b: Vec<usize> = arcs
        .iter()
        .map(|&(i, j)| model.add_var(Variable::binary(format!("b_{i}_{j}"))))
        .collect();
    let u: Vec<usize> = (0..n)
        .map(|i| {
            let (lo, hi) = if i == 0 { (1.0, 1.0) } else { (2.0, nf) };
            model.add_var(Variable::continuous(format!("u_{i}"), lo, Some(hi)))
        })
        .collect();
    model.objective = alloc::vec![(c, 1.0)];

    let mut cost = alloc::vec![(c, 1.0)];
    cost.extend(ones(a.iter().copied(), -1.0));
    model.add_constraint(
        "cost",
        cost,
        Relation::Eq,
        0.0,
        "c counts the selected nodes",
    );
    let note = "at most the given number of nodes are selected, and at least one";
    model.add_constraint(
        "size_bound",
        ones(a.iter().copied(), 1.0),
        Relation::Le,
        cds_size_bound as f64,
        note,
    );
    model.add_constraint(
        "nonempty",
        ones(a.iter().copied(), 1.0),
        Relation::Ge,
        1.0,
        note,
    );

    let note = "only selected nodes have outgoing tree edges";
    for (e, &(i, j)) in arcs.iter().enumerate() {
        if i != 0 {
            model.add_constraint(
                format!("out_{i}_{j}"),
                alloc::vec![(b[e], 1.0), (a[i], -1.0)],
                Relation::Le,
                0.0,
                note,
            );
        }
    }

    let root_out: Vec<usize> = (0..arcs.len())
        .filter(|&e| arcs[e].0 == 0)
        .map(|e| b[e])
        .collect();
    let note = "an unselected root has exactly one child";
    let mut terms = ones(root_out.iter().copied(), 1.0);
    terms.push((a[0], -(nf - 1.0)));
    model.add_constraint("root_out", terms, Relation::Le, 1.0, note);
    if n >= 2 {
        model.add_constraint(
            "root_child",
            ones(root_out.iter().copied(), 1.0),
            Relation::Ge,
            1.0,
            note,
        );
    }

    let note = "every other node has one parent and the root none";
    for j in 0..n {
        let incoming = ones(
            (0..arcs.len()).filter(|&e| arcs[e].1 == j).map(|e| b[e]),
            1.0,
        );
        let (name, rhs) = if j == 0 {
            (String::from("root_in"), 0.0)
        } else {
            (format!("in_{j}"), 1.0)
        };
        model.add_constraint(name, incoming, Relation::Eq, rhs, note);
    }

    model.add_constraint(
        "tree_edges",
        ones(b.iter().copied(), 1.0),
        Relation::Eq,
        nf - 1.0,
        "the tree has n - 1 edges",
    );

    let note = "order variables increase along tree edges";
    for (e, &(i, j)) in arcs.iter().enumerate() {
        model.add_constraint(
            format!("mtz_{i}_{j}"),
            alloc::vec![(u[i], 1.0), (u[j], -1.0), (b[e], nf)],
            Relation::Le,
            nf - 1.0,
            note,
        );
    }
    model
}

/// Adjacency-count formulation of an m-connected k-dominating set.
///
/// A selected node needs `m − 1` selected neighbours (so `m = 1` imposes
/// nothing), and an unselected one needs `k`. Counting neighbours is weaker
/// than vertex connectivity: for `m ≥ 2` the optimum may be smaller than the
/// true minimum.
pub fn build_mck_model(g: &UdgGraph, m: usize, k: usize) -> IlpModel {
    let n = g.len();
    let mut model = IlpModel::new(format!("mck n={n} m={m} k={k}"));
    let x: Vec<usize> = (0..n)
        .map(|s| model.add_var(Variable::binary(format!("x_{s}"))))
        .collect();
    model.objective = ones(x.iter().copied(), 1.0);
    let note = "a selected node has m - 1 selected neighbours";
    for s in 0..n {
        let mut terms = ones(g.neighbors(s).iter().map(|&t| x[t]), 1.0);
        terms.push((x[s], -(m as f64 - 1.0)));
        model.add_constraint(format!("conn_{s}"), terms, Relation::Ge, 0.0, note);
    }
    let note = "an unselected node has k selected neighbours";
    for s in 0..n {
        let mut terms = ones(g.neighbors(s).iter().map(|&t| x[t]), 1.0);
        terms.push((x[s], k as f64));
        model.add_constraint(format!("dom_{s}"), terms, Relation::Ge, k as f64, note);
    }
    model
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{fixtures, random_connected_topology, NodeSet};
    use crate::oracle::min_mck_set;

    /// Exact optimum of a pure binary model by enumerating all assignments.
    fn brute_binary(model: &IlpModel) -> Option<f64> {
        let n = model.variables.len();
        assert!(model.binary_count() == n && n <= 16);
        (0u32..1 << n)
            .filter_map(|bits| {
                let x: Vec<f64> = (0..n).map(|i| f64::from((bits >> i) & 1)).collect();
                model
                    .is_feasible(&x, 1e-9)
                    .then(|| model.objective_value(&x))
            })
            .min_by(f64::total_cmp)
    }

    /// Assignment encoding a CDS `d` rooted at node 0 in the tree model.
    fn tree_point(g: &UdgGraph, model: &IlpModel, d: &NodeSet) -> Vec<f64> {
        let n = g.len();
        let mut x = alloc::vec![0.0; model.variables.len()];
        let mut parent = alloc::vec![usize::MAX; n];
        let mut order = alloc::vec![0usize; n];
        let mut queue = alloc::collections::VecDeque::from([0]);
        let mut seen = alloc::vec![false; n];
        seen[0] = true;
        order[0] = 1;
        let mut next = 2;
        while let Some(v) = queue.pop_front() {
            if v != 0 && !d.contains(v) {
                continue;
            }
            if v == 0 && !d.contains(0) {
                // Single child: a dominator adjacent to the root.
                let w = *g.neighbors(0).iter().find(|&&w| d.contains(w)).unwrap();
                seen[w] = true;
                parent[w] = 0;
                order[w] = next;
                next += 1;
                queue.push_back(w);
                continue;
            }
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    order[w] = next;
                    next += 1;
                    queue.push_back(w);
                }
            }
        }
        x[model.var_index("c").unwrap()] = d.len() as f64;
        for v in d.iter() {
            x[model.var_index(&format!("a_{v}")).unwrap()] = 1.0;
        }
        for w in 1..n {
            x[model.var_index(&format!("b_{}_{}", parent[w], w)).unwrap()] = 1.0;
        }
        for v in 0..n {
            x[model.var_index(&format!("u_{v}")).unwrap()] = order[v] as f64;
        }
        x
    }

    #[test]
    fn k2_tree_model_shape() {
        let g = fixtures::line(2);
        let m = build_cds_tree_model(&g, 2);
        m.validate().unwrap();
        let count = |p: &str| m.variables.iter().filter(|v| v.name.starts_with(p)).count();
        assert_eq!((count("a_"), count("b_"), count("u_")), (2, 2, 2));
        let edges = m
            .constraints
            .iter()
            .find(|c| c.name == "tree_edges")
            .unwrap();
        assert_eq!((edges.terms.len(), edges.rhs), (2, 1.0));
    }

    #[test]
    fn tree_model_accepts_minimum_cds() {
        for seed in 0..20 {
            let g = random_connected_topology(8, 100.0, 100.0, 45.0, seed, 1000).unwrap();
            let model = build_cds_tree_model(&g, 8);
            let opt = min_mck_set(&g, 1, 1, 8).unwrap().optimum.unwrap();
            let x = tree_point(&g, &model, &opt);
            assert!(model.is_feasible(&x, 1e-9), "seed {seed}");
            assert_eq!(model.objective_value(&x), opt.len() as f64);
        }
    }

    #[test]
    fn tree_model_rejects_non_cds() {
        // Path 0-1-2-3: {1} does not dominate 3.
        let g = fixtures::line(4);
        let model = build_cds_tree_model(&g, 4);
        let mut x = alloc::vec![0.0; model.variables.len()];
        for (name, val) in [
            ("c", 1.0),
            ("a_1", 1.0),
            ("b_0_1", 1.0),
            ("b_1_2", 1.0),
            ("b_2_3", 1.0),
        ] {
            x[model.var_index(name).unwrap()] = val;
        }
        for (i, val) in [1.0, 2.0, 3.0, 4.0].into_iter().enumerate() {
            x[model.var_index(&format!("u_{i}")).unwrap()] = val;
        }
        assert!(!model.is_feasible(&x, 1e-9));
        // Selecting 2 as well repairs it.
        x[model.var_index("a_2").unwrap()] = 1.0;
        x[model.var_index("c").unwrap()] = 2.0;
        assert!(model.is_feasible(&x, 1e-9));
    }

    #[test]
    fn mck_model_small_cases() {
        let path = build_mck_model(&fixtures::line(3), 1, 1);
        assert_eq!(brute_binary(&path), Some(1.0));

        let edgeless = build_mck_model(&fixtures::edgeless(4), 1, 1);
        let all = [1.0; 4];
        assert!(edgeless.is_feasible(&all, 1e-9));
        for bits in 0u32..15 {
            let x: Vec<f64> = (0..4).map(|i| f64::from((bits >> i) & 1)).collect();
            assert!(!edgeless.is_feasible(&x, 1e-9));
        }

        // Counting neighbours admits four nodes on a hexagon.
        let hex = build_mck_model(&fixtures::cycle(6), 2, 1);
        assert_eq!(brute_binary(&hex), Some(4.0));
        assert_eq!(min_mck_set(&fixtures::cycle(6), 2, 1, 6).unwrap().size, 6);
    }

    #[test]
    fn mck_model_relaxes_oracle() {
        for seed in 0..20 {
            let g = random_connected_topology(9, 100.0, 100.0, 45.0, seed, 1000).unwrap();
            for (m, k) in [(1, 1), (2, 1), (2, 2)] {
                let model = build_mck_model(&g, m, k);
                let r = min_mck_set(&g, m, k, 9).unwrap();
                if let Some(opt) = r.optimum {
                    let x: Vec<f64> = (0..9)
                        .map(|v| if opt.contains(v) { 1.0 } else { 0.0 })
                        .collect();
                    assert!(model.is_feasible(&x, 1e-9), "seed {seed} ({m},{k})");
                }
            }
        }
    }

    #[test]
    fn validation_catches_bad_models() {
        let mut m = IlpModel::new("bad");
        m.add_var(Variable::binary("x"));
        m.add_var(Variable::binary("x"));
        assert!(m.validate().is_err());
        let mut m = IlpModel::new("bad");
        m.add_var(Variable::binary("x"));
        m.objective = alloc::vec![(3, 1.0)];
        assert!(m.validate().is_err());
    }
}
