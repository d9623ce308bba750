use super::{gw_equal, GWElement};
use crate::error::Result;
use crate::field::{Field, FieldElement};
use serde_json::{json, Value};
use std::collections::{HashMap, VecDeque};

/// The relation of `GW(F)` that justifies one rewrite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainRelation {
    /// `⟨u v^2⟩ = ⟨u⟩`.
    SquareFactor,
    /// `⟨u⟩ + ⟨-u⟩ = ⟨1⟩ + ⟨-1⟩`.
    Hyperbolic,
    /// `⟨a⟩ + ⟨b⟩ = ⟨a + b⟩ + ⟨(a + b) a b⟩`, applied to `a x^2, b y^2`.
    Sum,
}

impl ChainRelation {
    pub fn name(self) -> &'static str {
        match self {
            ChainRelation::SquareFactor => "square-factor",
            ChainRelation::Hyperbolic => "hyperbolic",
            ChainRelation::Sum => "sum",
        }
    }
}

/// One rewrite of at most two entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainStep {
    pub relation: ChainRelation,
    pub before: Vec<FieldElement>,
    pub after: Vec<FieldElement>,
    /// `(x, y)` for a [`ChainRelation::Sum`] step.
    pub scalars: Option<(FieldElement, FieldElement)>,
    /// The whole tuple after this step.
    pub state: Vec<FieldElement>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainPath {
    pub start: Vec<FieldElement>,
    pub steps: Vec<ChainStep>,
}

/// Limits for [`chain_equiv_search`].
#[derive(Debug, Clone, Copy)]
pub struct ChainBudget {
    pub depth: usize,
    pub max_states: usize,
}

impl Default for ChainBudget {
    fn default() -> Self {
        ChainBudget {
            depth: 4,
            max_states: 20_000,
        }
    }
}

type State = Vec<FieldElement>;

/// Breadth-first search for a chain of two-entry rewrites from `t1` to `t2`,
/// each an instance of a defining relation of `GW(F)`.
///
/// States are sorted tuples of square-class representatives; entries that
/// are not representatives are moved there (and back at the end) by
/// square-factor steps. Returns `None` when the classes differ or the budget
/// runs out.
pub fn chain_equiv_search(
    field: &Field,
    t1: &[FieldElement],
    t2: &[FieldElement],
    budget: ChainBudget,
) -> Result<Option<ChainPath>> {
    if t1.len() != t2.len() {
        return Ok(None);
    }
    if t1 == t2 {
        return Ok(Some(ChainPath {
            start: t1.to_vec(),
            steps: Vec::new(),
        }));
    }
    let g1 = GWElement::from_terms(field, t1.iter().map(|u| (u.clone(), 1)))?;
    let g2 = GWElement::from_terms(field, t2.iter().map(|u| (u.clone(), 1)))?;
    if !gw_equal(&g1, &g2)? {
        return Ok(None);
    }
    let f = field;
    let mut steps = Vec::new();
    let mut state: State = t1.to_vec();
    for i in 0..state.len() {
        let r = f.square_class_rep(&state[i]);
        if r != state[i] {
            let before = vec![state[i].clone()];
            state[i] = r.clone();
            steps.push(ChainStep {
                relation: ChainRelation::SquareFactor,
                before,
                after: vec![r],
                scalars: None,
                state: state.clone(),
            });
        }
    }
    let mut start = state.clone();
    start.sort();
    let mut goal: State = t2.iter().map(|u| f.square_class_rep(u)).collect();
    goal.sort();

    let Some(middle) = bfs(f, start, &goal, budget) else {
        return Ok(None);
    };
    steps.extend(middle);

    let mut state = goal;
    for (i, target) in t2.iter().enumerate() {
        // line the representatives up with `t2` before undoing the reduction
        let r = f.square_class_rep(target);
        let pos = (i..state.len()).find(|&j| state[j] == r).expect("goal holds every representative");
        state.swap(i, pos);
    }
    for (i, target) in t2.iter().enumerate() {
        if &state[i] != target {
            let before = vec![state[i].clone()];
            state[i] = target.clone();
            steps.push(ChainStep {
                relation: ChainRelation::SquareFactor,
                before,
                after: vec![target.clone()],
                scalars: None,
                state: state.clone(),
            });
        }
    }
    Ok(Some(ChainPath {
        start: t1.to_vec(),
        steps,
    }))
}

fn bfs(f: &Field, start: State, goal: &State, budget: ChainBudget) -> Option<Vec<ChainStep>> {
    if &start == goal {
        return Some(Vec::new());
    }
    let scalars = candidate_scalars(f);
    let mut parent: HashMap<State, Option<(State, ChainStep)>> = HashMap::new();
    parent.insert(start.clone(), None);
    let mut queue = VecDeque::from([(start, 0usize)]);
    while let Some((state, depth)) = queue.pop_front() {
        if depth == budget.depth {
            continue;
        }
        for step in moves(f, &state, &scalars) {
            if parent.contains_key(&step.state) || parent.len() >= budget.max_states {
                continue;
            }
            let next = step.state.clone();
            parent.insert(next.clone(), Some((state.clone(), step)));
            if &next == goal {
                let mut path = Vec::new();
                let mut cur = next;
                while let Some(Some((prev, step))) = parent.remove(&cur) {
                    path.push(step);
                    cur = prev;
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back((next, depth + 1));
        }
    }
    None
}

/// Nonzero scalars tried as `x, y` in sum steps: every element of a finite
/// field, otherwise `1`, the variables and their successors.
fn candidate_scalars(f: &Field) -> Vec<FieldElement> {
    if let Some(units) = f.units() {
        return units;
    }
    let mut out = vec![f.one()];
    for i in 0..f.nvars() {
        let v = f.var(i).expect("variable index in range");
        out.push(f.add(&v, &f.one()));
        out.push(v);
    }
    out
}

fn moves(f: &Field, state: &State, scalars: &[FieldElement]) -> Vec<ChainStep> {
    let mut out = Vec::new();
    let rep = |x: &FieldElement| f.square_class_rep(x);
    let minus_one = rep(&f.neg(&f.one()));
    let mut push = |i: usize, j: usize, relation, after: [FieldElement; 2], scalars| {
        let mut next = state.clone();
        next[i] = after[0].clone();
        next[j] = after[1].clone();
        next.sort();
        if &next != state {
            out.push(ChainStep {
                relation,
                before: vec![state[i].clone(), state[j].clone()],
                after: after.to_vec(),
                scalars,
                state: next,
            });
        }
    };
    for i in 0..state.len() {
        for j in i + 1..state.len() {
            let (a, b) = (&state[i], &state[j]);
            let ab = f.mul(a, b);
            for x in scalars {
                for y in scalars {
                    let c = f.add(&f.mul(a, &f.square(x)), &f.mul(b, &f.square(y)));
                    if f.is_zero(&c) {
                        continue;
                    }
                    let d = rep(&f.mul(&c, &ab));
                    push(i, j, ChainRelation::Sum, [rep(&c), d], Some((x.clone(), y.clone())));
                }
            }
            if *b == rep(&f.neg(a)) {
                push(i, j, ChainRelation::Hyperbolic, [f.one(), minus_one.clone()], None);
            }
            if f.is_one(a) && *b == minus_one {
                for u in scalars {
                    let u = rep(u);
                    let mu = rep(&f.neg(&u));
                    push(i, j, ChainRelation::Hyperbolic, [u, mu], None);
                }
            }
        }
    }
    out
}

impl ChainPath {
    /// Checks each step against its relation and the running tuple.
    pub fn verify(&self, f: &Field) -> Result<bool> {
        let mut prev = GWElement::from_terms(f, self.start.iter().map(|u| (u.clone(), 1)))?;
        for step in &self.steps {
            let next = GWElement::from_terms(f, step.state.iter().map(|u| (u.clone(), 1)))?;
            if !gw_equal(&prev, &next)? || !step.instance_holds(f) {
                return Ok(false);
            }
            prev = next;
        }
        Ok(true)
    }

    /// One line per step, elements printed in field syntax.
    pub fn describe(&self, f: &Field) -> String {
        let show = |xs: &[FieldElement]| {
            format!("<{}>", xs.iter().map(|x| f.format(x)).collect::<Vec<_>>().join(", "))
        };
        let mut out = String::new();
        for (k, s) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "{}. {}: {} -> {}\n",
                k + 1,
                s.relation.name(),
                show(&s.before),
                show(&s.after)
            ));
        }
        out
    }

    pub fn to_json(&self, f: &Field) -> Value {
        let list = |xs: &[FieldElement]| xs.iter().map(|x| f.format(x)).collect::<Vec<_>>();
        json!({
            "start": list(&self.start),
            "steps": self.steps.iter().map(|s| json!({
                "relation": s.relation.name(),
                "before": list(&s.before),
                "after": list(&s.after),
                "scalars": s.scalars.as_ref().map(|(x, y)| list(&[x.clone(), y.clone()])),
                "state": list(&s.state),
            })).collect::<Vec<_>>(),
        })
    }
}

impl ChainStep {
    /// The rewrite is literally an instance of its relation.
    fn instance_holds(&self, f: &Field) -> bool {
        match (self.relation, &self.before[..], &self.after[..]) {
            (ChainRelation::SquareFactor, [u], [v]) => f.same_square_class(u, v),
            (ChainRelation::Hyperbolic, [a, b], [c, d]) => {
                let minus = |x: &FieldElement| f.neg(x);
                f.same_square_class(b, &minus(a)) && f.same_square_class(d, &minus(c))
            }
            (ChainRelation::Sum, [a, b], [c, d]) => {
                let Some((x, y)) = &self.scalars else { return false };
                let ax = f.mul(a, &f.square(x));
                let by = f.mul(b, &f.square(y));
                let s = f.add(&ax, &by);
                !f.is_zero(&s)
                    && f.same_square_class(c, &s)
                    && f.same_square_class(d, &f.mul(&s, &f.mul(&ax, &by)))
            }
            _ => false,
        }
    }
}
