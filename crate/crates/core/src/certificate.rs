//! Induction certificates for `f(A) <= 2F(|A|)`.
//!
//! [`trace_induction`] replays the inductive proof on a concrete family and
//! records, at every step, which case applied, the coordinate split on and
//! the slack of every inequality used. [`verify_certificate`] re-derives all
//! of it from the family with deliberately plain set code (no word tricks,
//! `F` as a prefix sum of popcounts) and checks that the root bound follows
//! from the recorded quantities.
//!
//! Tree shape:
//!
//! - `COMPLEMENT`: `|A| > 2^{n-1}`. The bound is the large form
//!   `2F(|A|) + 2|A| - 2^n`; the single child is `A^c` and the two slacks
//!   agree.
//! - `BASE`: `n = 1` and `|A| <= 1`.
//! - `CASE1`: both sections along `coord` have at most `2^{n-2}` members.
//! - `CASE2`: otherwise, with `2^{n-2} < |D| <= 2^{n-2} + |C|`. The larger
//!   child carries the large-form bound.
//!
//! For `CASE1`/`CASE2` the children are `C` then `D`, the smaller and larger
//! sections (`swap` is set when `C` is the lower section), and
//! `bound - f = slack(C) + slack(D) + 2·gap + cross`, where `gap` is the
//! Hart or shifted-Hart slack and `cross` the cross-term slack.

use std::fmt;
use std::str::FromStr;

use crate::binary_order::f_closed_form;
use crate::cube::{Family, Sign};
use crate::error::{Error, Result};
use crate::verify::CrossTerms;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CaseTag {
    Base,
    Case1,
    Case2,
    Complement,
}

impl CaseTag {
    pub fn id(self) -> &'static str {
        match self {
            CaseTag::Base => "BASE",
            CaseTag::Case1 => "CASE1",
            CaseTag::Case2 => "CASE2",
            CaseTag::Complement => "COMPLEMENT",
        }
    }
}

impl FromStr for CaseTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [CaseTag::Base, CaseTag::Case1, CaseTag::Case2, CaseTag::Complement]
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::Parse(format!("unknown case {s:?}")))
    }
}

/// `Plain` is `f(A) <= 2F(|A|)`; `Large` is `f(A) <= 2F(|A|) + 2|A| - 2^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundForm {
    Plain,
    Large,
}

impl BoundForm {
    pub fn id(self) -> &'static str {
        match self {
            BoundForm::Plain => "plain",
            BoundForm::Large => "large",
        }
    }

    fn bound(self, f_of_size: u64, n: u32, size: u64) -> i64 {
        let plain = 2 * f_of_size as i64;
        match self {
            BoundForm::Plain => plain,
            BoundForm::Large => plain + 2 * size as i64 - (1i64 << n),
        }
    }
}

impl FromStr for BoundForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(BoundForm::Plain),
            "large" => Ok(BoundForm::Large),
            _ => Err(Error::Parse(format!("unknown bound form {s:?}"))),
        }
    }
}

/// One recorded inequality with its operands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slack {
    /// `bound - f(A)` at this node.
    Bound { value: i64 },
    /// `F(x+y) - F(x) - F(y) - min(x, y)`.
    Hart { x: u64, y: u64, value: i64 },
    /// `F(x+y) - F(y) - F(x) - y + 2^{n-1} - x`, with `n` the child dimension.
    HartLarge { x: u64, y: u64, n: u32, value: i64 },
    /// Cross-term slack for `(C, D)`.
    Cross { terms: CrossTerms, value: i64 },
}

impl Slack {
    pub fn value(&self) -> i64 {
        match *self {
            Slack::Bound { value }
            | Slack::Hart { value, .. }
            | Slack::HartLarge { value, .. }
            | Slack::Cross { value, .. } => value,
        }
    }

    pub fn value_mut(&mut self) -> &mut i64 {
        match self {
            Slack::Bound { value }
            | Slack::Hart { value, .. }
            | Slack::HartLarge { value, .. }
            | Slack::Cross { value, .. } => value,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            Slack::Bound { .. } => "bound",
            Slack::Hart { .. } => "hart",
            Slack::HartLarge { .. } => "hart_large",
            Slack::Cross { .. } => "cross",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub case: CaseTag,
    pub n: u32,
    pub size: u64,
    pub f: u64,
    pub form: BoundForm,
    pub bound: i64,
    /// Split coordinate for `CASE1`/`CASE2`.
    pub coord: Option<u32>,
    /// `C` is the lower section.
    pub swapped: bool,
    /// `COMPLEMENT` only: `f(A) - f(A^c) = 2(n+1)(2^{n-1} - |A^c|)`.
    pub correction: Option<i64>,
    pub slacks: Vec<Slack>,
    /// Indices into [`Certificate::nodes`].
    pub children: Vec<usize>,
}

impl Node {
    /// The `bound` slack, if recorded.
    pub fn bound_slack(&self) -> Option<i64> {
        self.slacks.iter().find_map(|s| match s {
            Slack::Bound { value } => Some(*value),
            _ => None,
        })
    }
}

/// A certificate for one family. Node 0 is the root and nodes are stored in
/// preorder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub subject: Family,
    pub nodes: Vec<Node>,
}

impl Certificate {
    pub fn root(&self) -> &Node {
        &self.nodes[0]
    }

    /// Every recorded slack, in node order.
    pub fn slacks(&self) -> impl Iterator<Item = &Slack> {
        self.nodes.iter().flat_map(|n| n.slacks.iter())
    }

    pub fn slack_count(&self) -> usize {
        self.nodes.iter().map(|n| n.slacks.len()).sum()
    }

    /// Mutable access to the `index`-th slack in node order.
    pub fn slack_mut(&mut self, index: usize) -> Option<&mut Slack> {
        self.nodes.iter_mut().flat_map(|n| n.slacks.iter_mut()).nth(index)
    }
}

/// Replays the induction on `a`. Requires `n >= 1`.
pub fn trace_induction(a: &Family) -> Result<Certificate> {
    if a.dimension() == 0 {
        return Err(Error::Precondition("tracing needs n >= 1".into()));
    }
    let mut nodes = Vec::new();
    trace_node(&mut nodes, a)?;
    Ok(Certificate { subject: a.clone(), nodes })
}

fn trace_node(nodes: &mut Vec<Node>, a: &Family) -> Result<usize> {
    let n = a.dimension();
    let size = a.size();
    let half = 1u64 << (n - 1);
    let f = a.potential();
    let id = nodes.len();
    let form = if size > half { BoundForm::Large } else { BoundForm::Plain };
    let bound = form.bound(f_closed_form(size), n, size);
    nodes.push(Node {
        case: CaseTag::Base,
        n,
        size,
        f,
        form,
        bound,
        coord: None,
        swapped: false,
        correction: None,
        slacks: vec![Slack::Bound { value: bound - f as i64 }],
        children: Vec::new(),
    });

    if size > half {
        let complement = a.complement();
        let correction = 2 * (n as i64 + 1) * (half as i64 - complement.size() as i64);
        let child = trace_node(nodes, &complement)?;
        let node = &mut nodes[id];
        node.case = CaseTag::Complement;
        node.correction = Some(correction);
        node.children = vec![child];
        return Ok(id);
    }
    if n == 1 {
        return Ok(id);
    }

    let quarter = 1u64 << (n - 2);
    let sizes = (1..=n)
        .map(|i| Ok((a.section_size(i, Sign::Upper)?, a.section_size(i, Sign::Lower)?)))
        .collect::<Result<Vec<_>>>()?;
    let case1 = sizes.iter().position(|&(up, lo)| up.max(lo) <= quarter);
    let case2 = || sizes.iter().position(|&(up, lo)| up.abs_diff(lo) <= quarter);
    let (case, index) = match (case1, case2()) {
        (Some(i), _) => (CaseTag::Case1, i),
        (None, Some(i)) => (CaseTag::Case2, i),
        (None, None) => {
            return Err(Error::Invariant(format!(
                "no coordinate qualifies for either case on {a}"
            )))
        }
    };
    let coord = index as u32 + 1;
    let (up, lo) = a.sections(coord)?;
    let swapped = up.size() > lo.size();
    let (c, d) = if swapped { (lo, up) } else { (up, lo) };
    let (x, y) = (c.size(), d.size());
    let gap = match case {
        CaseTag::Case1 => Slack::Hart { x, y, value: hart_slack(f_closed_form, x, y) },
        _ => Slack::HartLarge { x, y, n: n - 1, value: hart_large_slack(f_closed_form, x, y, n - 1) },
    };
    let terms = CrossTerms::of(&c, &d)?;
    let cross = Slack::Cross { terms, value: terms.slack() };
    let c_id = trace_node(nodes, &c)?;
    let d_id = trace_node(nodes, &d)?;
    let node = &mut nodes[id];
    node.case = case;
    node.coord = Some(coord);
    node.swapped = swapped;
    node.slacks.extend([gap, cross]);
    node.children = vec![c_id, d_id];
    Ok(id)
}

fn hart_slack(f: impl Fn(u64) -> u64, x: u64, y: u64) -> i64 {
    f(x + y) as i64 - f(x) as i64 - f(y) as i64 - x.min(y) as i64
}

fn hart_large_slack(f: impl Fn(u64) -> u64, x: u64, y: u64, n: u32) -> i64 {
    f(x + y) as i64 - f(y) as i64 - f(x) as i64 - y as i64 + (1i64 << (n - 1)) - x as i64
}

/// Where a certificate disagrees with its family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertMismatch {
    /// `root` followed by `/C`, `/D` or `/comp` per step.
    pub path: String,
    pub node: Option<usize>,
    pub quantity: String,
    pub expected: String,
    pub recorded: String,
}

impl fmt::Display for CertMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Some(id) => write!(f, "{} (node {id})", self.path)?,
            None => f.write_str(&self.path)?,
        }
        write!(f, ": {} expected {} recorded {}", self.quantity, self.expected, self.recorded)
    }
}

impl std::error::Error for CertMismatch {}

/// Plain set model used by the checker.
mod naive {
    /// A family of `Q_n` as a sorted list of member codes plus a membership
    /// table.
    pub struct Set {
        pub n: u32,
        pub members: Vec<u32>,
        present: Vec<bool>,
    }

    impl Set {
        pub fn new(n: u32, members: Vec<u32>) -> Set {
            let mut present = vec![false; 1 << n];
            for &v in &members {
                present[v as usize] = true;
            }
            Set { n, members, present }
        }

        pub fn size(&self) -> u64 {
            self.members.len() as u64
        }

        pub fn has(&self, v: u32) -> bool {
            self.present[v as usize]
        }

        fn full(&self) -> u32 {
            ((1u64 << self.n) - 1) as u32
        }

        /// Unordered adjacent pairs inside the set.
        pub fn edges(&self) -> u64 {
            let mut count = 0;
            for &v in &self.members {
                for d in 0..self.n {
                    let w = v ^ (1 << d);
                    if w > v && self.has(w) {
                        count += 1;
                    }
                }
            }
            count
        }

        /// `|X ∩ Ȳ|`: members of `self` whose antipode lies in `other`.
        pub fn with_antipodal(&self, other: &Set) -> u64 {
            self.members.iter().filter(|&&v| other.has(v ^ self.full())).count() as u64
        }

        pub fn common(&self, other: &Set) -> u64 {
            self.members.iter().filter(|&&v| other.has(v)).count() as u64
        }

        pub fn potential(&self) -> u64 {
            2 * self.edges() + self.with_antipodal(self)
        }

        pub fn complement(&self) -> Set {
            Set::new(self.n, (0..=self.full()).filter(|&v| !self.has(v)).collect())
        }

        /// Members with (`upper`) or without element `coord`, with that
        /// element deleted.
        pub fn section(&self, coord: u32, upper: bool) -> Set {
            let bit = 1u32 << (coord - 1);
            let low = bit - 1;
            let members = self
                .members
                .iter()
                .filter(|&&v| (v & bit != 0) == upper)
                .map(|&v| (v & low) | ((v >> 1) & !low))
                .collect();
            Set::new(self.n - 1, members)
        }
    }

    /// `F(0..=max)` as running sums of popcounts.
    pub fn f_prefix(max: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(max as usize + 1);
        let mut acc = 0;
        out.push(0);
        for k in 0..max {
            acc += k.count_ones() as u64;
            out.push(acc);
        }
        out
    }
}

struct Checker<'c> {
    cert: &'c Certificate,
    f: Vec<u64>,
    visited: Vec<bool>,
}

type Check<T = ()> = std::result::Result<T, CertMismatch>;

fn mismatch(path: &str, node: Option<usize>, quantity: &str, expected: impl fmt::Display, recorded: impl fmt::Display) -> CertMismatch {
    CertMismatch {
        path: path.to_string(),
        node,
        quantity: quantity.to_string(),
        expected: expected.to_string(),
        recorded: recorded.to_string(),
    }
}

fn expect<T: PartialEq + fmt::Display>(path: &str, id: usize, quantity: &str, expected: T, recorded: T) -> Check {
    if expected == recorded {
        Ok(())
    } else {
        Err(mismatch(path, Some(id), quantity, expected, recorded))
    }
}

impl Checker<'_> {
    fn f(&self, k: u64) -> i64 {
        self.f[k as usize] as i64
    }

    /// Checks the subtree at `id` against `set` and returns its bound slack.
    fn node(&mut self, id: usize, set: &naive::Set, path: &str) -> Check<i64> {
        let Some(node) = self.cert.nodes.get(id) else {
            return Err(mismatch(path, None, "child index", format!("< {}", self.cert.nodes.len()), id));
        };
        if std::mem::replace(&mut self.visited[id], true) {
            return Err(mismatch(path, Some(id), "node reuse", "each node referenced once", id));
        }
        let n = set.n;
        let size = set.size();
        let half = 1u64 << (n - 1);
        expect(path, id, "n", n, node.n)?;
        expect(path, id, "size", size, node.size)?;
        expect(path, id, "f", set.potential(), node.f)?;

        let case = if size > half {
            CaseTag::Complement
        } else if n == 1 {
            CaseTag::Base
        } else {
            match node.case {
                CaseTag::Case1 | CaseTag::Case2 => node.case,
                _ => CaseTag::Case1,
            }
        };
        expect(path, id, "case", case.id(), node.case.id())?;
        let form = if case == CaseTag::Complement { BoundForm::Large } else { BoundForm::Plain };
        expect(path, id, "form", form.id(), node.form.id())?;
        expect(path, id, "bound", form.bound(self.f[size as usize], n, size), node.bound)?;

        let bound_slack = node.bound - node.f as i64;
        let kinds: &[&str] = match case {
            CaseTag::Base | CaseTag::Complement => &["bound"],
            CaseTag::Case1 => &["bound", "hart", "cross"],
            CaseTag::Case2 => &["bound", "hart_large", "cross"],
        };
        let recorded: Vec<&str> = node.slacks.iter().map(Slack::kind).collect();
        expect(path, id, "slacks", kinds.join(","), recorded.join(","))?;
        for slack in &node.slacks {
            if slack.value() < 0 {
                return Err(mismatch(path, Some(id), &format!("{} slack sign", slack.kind()), ">= 0", slack.value()));
            }
        }
        expect(path, id, "bound slack", bound_slack, node.slacks[0].value())?;

        let arity = match case {
            CaseTag::Base => 0,
            CaseTag::Complement => 1,
            _ => 2,
        };
        expect(path, id, "children", arity, node.children.len())?;
        if let (false, Some(c)) = (case == CaseTag::Complement, node.correction) {
            return Err(mismatch(path, Some(id), "correction", "-", c));
        }
        if !matches!(case, CaseTag::Case1 | CaseTag::Case2) && (node.coord.is_some() || node.swapped) {
            return Err(mismatch(path, Some(id), "coord", "- swap=false", format!("{:?} swap={}", node.coord, node.swapped)));
        }

        match case {
            CaseTag::Base => {}
            CaseTag::Complement => {
                let complement = set.complement();
                let correction = 2 * (n as i64 + 1) * (half as i64 - complement.size() as i64);
                let Some(recorded) = node.correction else {
                    return Err(mismatch(path, Some(id), "correction", correction, "-"));
                };
                expect(path, id, "correction", correction, recorded)?;
                let child = node.children[0];
                let child_slack = self.node(child, &complement, &format!("{path}/comp"))?;
                let child_node = &self.cert.nodes[child];
                expect(path, id, "complement f", child_node.f as i64 + correction, node.f as i64)?;
                expect(path, id, "complement slack", child_slack, bound_slack)?;
            }
            CaseTag::Case1 | CaseTag::Case2 => {
                let Some(coord) = node.coord.filter(|&i| (1..=n).contains(&i)) else {
                    return Err(mismatch(path, Some(id), "coord", format!("1..={n}"), format!("{:?}", node.coord)));
                };
                let (c, d) = (set.section(coord, !node.swapped), set.section(coord, node.swapped));
                let (x, y) = (c.size(), d.size());
                if x > y {
                    return Err(mismatch(path, Some(id), "swap", "|C| <= |D|", format!("|C|={x} |D|={y}")));
                }
                let quarter = 1u64 << (n - 2);
                let condition = match case {
                    CaseTag::Case1 => y <= quarter,
                    _ => quarter < y && y <= quarter + x,
                };
                if !condition {
                    return Err(mismatch(path, Some(id), "case condition", case.id(), format!("|C|={x} |D|={y}")));
                }

                let gap = match (case, node.slacks[1]) {
                    (CaseTag::Case1, Slack::Hart { x: rx, y: ry, value }) => {
                        expect(path, id, "hart x", x, rx)?;
                        expect(path, id, "hart y", y, ry)?;
                        let expected = self.f(x + y) - self.f(x) - self.f(y) - x as i64;
                        expect(path, id, "hart slack", expected, value)?;
                        value
                    }
                    (_, Slack::HartLarge { x: rx, y: ry, n: rn, value }) => {
                        expect(path, id, "hart_large x", x, rx)?;
                        expect(path, id, "hart_large y", y, ry)?;
                        expect(path, id, "hart_large n", n - 1, rn)?;
                        let expected =
                            self.f(x + y) - self.f(y) - self.f(x) - y as i64 + quarter as i64 - x as i64;
                        expect(path, id, "hart_large slack", expected, value)?;
                        value
                    }
                    _ => unreachable!("slack kinds checked above"),
                };
                let Slack::Cross { terms, value: cross } = node.slacks[2] else {
                    unreachable!("slack kinds checked above")
                };
                let expected_terms = [x, y, c.with_antipodal(&c), d.with_antipodal(&d), c.common(&d), c.with_antipodal(&d)];
                let recorded_terms =
                    [terms.c_size, terms.d_size, terms.c_self, terms.d_self, terms.c_and_d, terms.c_and_dbar];
                for ((name, e), r) in
                    ["c", "d", "c_self", "d_self", "c_and_d", "c_and_dbar"].iter().zip(expected_terms).zip(recorded_terms)
                {
                    expect(path, id, &format!("cross {name}"), e, r)?;
                }
                let expected_cross = (terms.c_self + terms.d_self + 2 * x) as i64 - 2 * (terms.c_and_d + terms.c_and_dbar) as i64;
                expect(path, id, "cross slack", expected_cross, cross)?;

                let (c_id, d_id) = (node.children[0], node.children[1]);
                let slack_c = self.node(c_id, &c, &format!("{path}/C"))?;
                let slack_d = self.node(d_id, &d, &format!("{path}/D"))?;
                let (fc, fd) = (self.cert.nodes[c_id].f as i64, self.cert.nodes[d_id].f as i64);
                let master = fc + fd - terms.c_self as i64 - terms.d_self as i64
                    + 2 * terms.c_and_d as i64
                    + 2 * terms.c_and_dbar as i64;
                expect(path, id, "section identity", master, node.f as i64)?;
                expect(path, id, "assembled slack", slack_c + slack_d + 2 * gap + cross, bound_slack)?;
            }
        }
        Ok(bound_slack)
    }
}

/// Checks `cert` against `a` from scratch. On success the root bound
/// `f(A) <= bound` holds and follows from the recorded slacks.
pub fn verify_certificate(cert: &Certificate, a: &Family) -> std::result::Result<(), CertMismatch> {
    if cert.subject != *a {
        return Err(mismatch("root", None, "subject", a, &cert.subject));
    }
    let n = a.dimension();
    if n == 0 {
        return Err(mismatch("root", None, "n", ">= 1", n));
    }
    if cert.nodes.is_empty() {
        return Err(mismatch("root", None, "nodes", ">= 1", 0));
    }
    let mut checker = Checker { cert, f: naive::f_prefix(1u64 << n), visited: vec![false; cert.nodes.len()] };
    let set = naive::Set::new(n, a.iter().collect());
    let slack = checker.node(0, &set, "root")?;
    if let Some(id) = checker.visited.iter().position(|v| !v) {
        return Err(mismatch("root", Some(id), "unreachable node", "none", id));
    }
    if slack < 0 {
        return Err(mismatch("root", Some(0), "root slack", ">= 0", slack));
    }
    Ok(())
}

/// Whether `cert` checks out against `a`.
pub fn certificate_holds(cert: &Certificate, a: &Family) -> bool {
    verify_certificate(cert, a).is_ok()
}

/// Text form, one record per line:
///
/// ```text
/// certificate
/// subject n=<n> hex=<digits>
/// nodes <count>
/// node <id> case=<tag> n=<n> size=<s> f=<f> form=plain|large bound=<b> coord=<i|-> swap=<bool> [correction=<c>] children=<a,b|->
/// slack bound value=<v>
/// slack hart x=<x> y=<y> value=<v>
/// slack hart_large x=<x> y=<y> n=<n> value=<v>
/// slack cross c=<|C|> d=<|D|> c_self=<..> d_self=<..> c_and_d=<..> c_and_dbar=<..> value=<v>
/// end
/// ```
///
/// Each node line is followed by its slack lines.
impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "certificate")?;
        writeln!(f, "subject {}", self.subject)?;
        writeln!(f, "nodes {}", self.nodes.len())?;
        for (id, node) in self.nodes.iter().enumerate() {
            write!(
                f,
                "node {id} case={} n={} size={} f={} form={} bound={} coord={} swap={}",
                node.case.id(),
                node.n,
                node.size,
                node.f,
                node.form.id(),
                node.bound,
                node.coord.map_or("-".to_string(), |c| c.to_string()),
                node.swapped
            )?;
            if let Some(c) = node.correction {
                write!(f, " correction={c}")?;
            }
            let children: Vec<String> = node.children.iter().map(usize::to_string).collect();
            writeln!(f, " children={}", if children.is_empty() { "-".into() } else { children.join(",") })?;
            for slack in &node.slacks {
                match slack {
                    Slack::Bound { value } => writeln!(f, "slack bound value={value}")?,
                    Slack::Hart { x, y, value } => writeln!(f, "slack hart x={x} y={y} value={value}")?,
                    Slack::HartLarge { x, y, n, value } => {
                        writeln!(f, "slack hart_large x={x} y={y} n={n} value={value}")?
                    }
                    Slack::Cross { terms: t, value } => writeln!(
                        f,
                        "slack cross c={} d={} c_self={} d_self={} c_and_d={} c_and_dbar={} value={value}",
                        t.c_size, t.d_size, t.c_self, t.d_self, t.c_and_d, t.c_and_dbar
                    )?,
                }
            }
        }
        writeln!(f, "end")
    }
}

/// Splits `key=value` tokens, requiring exactly the given keys in order.
fn fields<'a>(tokens: &[&'a str], keys: &[&str]) -> Result<Vec<&'a str>> {
    if tokens.len() != keys.len() {
        return Err(Error::Parse(format!("expected fields {keys:?}, got {tokens:?}")));
    }
    tokens
        .iter()
        .zip(keys)
        .map(|(token, key)| {
            token
                .strip_prefix(key)
                .and_then(|rest| rest.strip_prefix('='))
                .ok_or_else(|| Error::Parse(format!("expected {key}=..., got {token:?}")))
        })
        .collect()
}

fn number<T: FromStr>(s: &str) -> Result<T> {
    // reject signs, spaces and leading zeros so the text form stays canonical
    let digits = s.strip_prefix('-').unwrap_or(s);
    let canonical = !digits.is_empty()
        && digits.bytes().all(|b| b.is_ascii_digit())
        && (digits == "0" || !digits.starts_with('0'))
        && s != "-0";
    if !canonical {
        return Err(Error::Parse(format!("bad number {s:?}")));
    }
    s.parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))
}

fn parse_node(tokens: &[&str], expected_id: usize) -> Result<Node> {
    let has_correction = tokens.iter().any(|t| t.starts_with("correction="));
    let mut keys = vec!["case", "n", "size", "f", "form", "bound", "coord", "swap"];
    if has_correction {
        keys.push("correction");
    }
    keys.push("children");
    let id: usize = number(tokens.first().copied().unwrap_or(""))?;
    if id != expected_id {
        return Err(Error::Parse(format!("node {id} out of order, expected {expected_id}")));
    }
    let v = fields(&tokens[1..], &keys)?;
    let mut at = 8;
    let correction = if has_correction {
        at += 1;
        Some(number(v[8])?)
    } else {
        None
    };
    let children = match v[at] {
        "-" => Vec::new(),
        list => list.split(',').map(number).collect::<Result<Vec<usize>>>()?,
    };
    Ok(Node {
        case: v[0].parse()?,
        n: number(v[1])?,
        size: number(v[2])?,
        f: number(v[3])?,
        form: v[4].parse()?,
        bound: number(v[5])?,
        coord: match v[6] {
            "-" => None,
            c => Some(number(c)?),
        },
        swapped: match v[7] {
            "true" => true,
            "false" => false,
            s => return Err(Error::Parse(format!("bad swap flag {s:?}"))),
        },
        correction,
        slacks: Vec::new(),
        children,
    })
}

fn parse_slack(tokens: &[&str]) -> Result<Slack> {
    let (kind, rest) = tokens.split_first().ok_or_else(|| Error::Parse("empty slack line".into()))?;
    Ok(match *kind {
        "bound" => {
            let v = fields(rest, &["value"])?;
            Slack::Bound { value: number(v[0])? }
        }
        "hart" => {
            let v = fields(rest, &["x", "y", "value"])?;
            Slack::Hart { x: number(v[0])?, y: number(v[1])?, value: number(v[2])? }
        }
        "hart_large" => {
            let v = fields(rest, &["x", "y", "n", "value"])?;
            Slack::HartLarge { x: number(v[0])?, y: number(v[1])?, n: number(v[2])?, value: number(v[3])? }
        }
        "cross" => {
            let v = fields(rest, &["c", "d", "c_self", "d_self", "c_and_d", "c_and_dbar", "value"])?;
            Slack::Cross {
                terms: CrossTerms {
                    c_size: number(v[0])?,
                    d_size: number(v[1])?,
                    c_self: number(v[2])?,
                    d_self: number(v[3])?,
                    c_and_d: number(v[4])?,
                    c_and_dbar: number(v[5])?,
                },
                value: number(v[6])?,
            }
        }
        other => return Err(Error::Parse(format!("unknown slack kind {other:?}"))),
    })
}

impl FromStr for Certificate {
    type Err = Error;

    /// Strict inverse of the `Display` form.
    fn from_str(s: &str) -> Result<Self> {
        let body = s.strip_suffix('\n').ok_or_else(|| Error::Parse("missing final newline".into()))?;
        let mut lines = body.split('\n');
        let mut next = || lines.next().ok_or_else(|| Error::Parse("truncated certificate".into()));
        if next()? != "certificate" {
            return Err(Error::Parse("expected `certificate` header".into()));
        }
        let subject: Family = next()?
            .strip_prefix("subject ")
            .ok_or_else(|| Error::Parse("expected `subject` line".into()))?
            .parse()?;
        let count: usize = number(
            next()?.strip_prefix("nodes ").ok_or_else(|| Error::Parse("expected `nodes` line".into()))?,
        )?;
        let mut nodes: Vec<Node> = Vec::new();
        loop {
            let line = next()?;
            let tokens: Vec<&str> = line.split(' ').collect();
            match tokens[0] {
                "node" => nodes.push(parse_node(&tokens[1..], nodes.len())?),
                "slack" => nodes
                    .last_mut()
                    .ok_or_else(|| Error::Parse("slack before any node".into()))?
                    .slacks
                    .push(parse_slack(&tokens[1..])?),
                "end" if line == "end" => break,
                _ => return Err(Error::Parse(format!("unexpected line {line:?}"))),
            }
        }
        if next().is_ok() {
            return Err(Error::Parse("content after `end`".into()));
        }
        if nodes.len() != count {
            return Err(Error::Parse(format!("header says {count} nodes, found {}", nodes.len())));
        }
        Ok(Certificate { subject, nodes })
    }
}
