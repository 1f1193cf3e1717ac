//! Exhaustive and sampled checkers.
//!
//! Every checked statement is a theorem, so any violation found here is a
//! bug in this crate. Exhaustive runs are sharded over the enumeration
//! order and sampled runs over fixed blocks of samples; see [`shard`].

pub mod report;
pub mod shard;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::antipodal::{extremal_profile, sample_antipodal, PairIndex};
use crate::binary_order::FTable;
use crate::cube::{small, Family, Sign};
use crate::error::{Error, Result};
use crate::sampling::{random_family_up_to, rng_for, DEFAULT_SEED};

pub use report::{Mode, Statement, Tally, VerificationReport, Witness, VIOLATION_CAP};

/// Samples drawn in sampled mode when no budget is given.
pub const DEFAULT_SAMPLES: u64 = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyConfig {
    pub mode: Mode,
    /// Exhaustive: cap on instances visited. Sampled: number of samples.
    pub budget: Option<u64>,
    pub seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Allow exhaustive runs one dimension past the default limit.
    pub force: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { mode: Mode::Exhaustive, budget: None, seed: DEFAULT_SEED, threads: None, force: false }
    }
}

impl VerifyConfig {
    pub fn exhaustive() -> Self {
        Self::default()
    }

    pub fn sampled(samples: u64, seed: u64) -> Self {
        VerifyConfig { mode: Mode::Sampled, budget: Some(samples), seed, ..Self::default() }
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads);
        self
    }

    pub fn with_force(mut self, force: bool) -> Self {
        self.force = force;
        self
    }

    fn samples(&self) -> u64 {
        self.budget.unwrap_or(DEFAULT_SAMPLES)
    }

    fn report_seed(&self) -> Option<u64> {
        (self.mode == Mode::Sampled).then_some(self.seed)
    }

    /// Rejects exhaustive runs above `max` (or `max + 1` with `force`).
    fn check_exhaustive(&self, what: &str, n: u32, max: u32) -> Result<()> {
        let limit = if self.force { max + 1 } else { max };
        if n > limit {
            return Err(Error::Capability(format!(
                "exhaustive {what} is limited to n <= {max} (n = {} with force); got n = {n}",
                max + 1
            )));
        }
        Ok(())
    }

    /// Instances to visit out of `total`, and whether that is all of them.
    fn exhaustive_span(&self, total: u64) -> (u64, bool) {
        match self.budget {
            Some(b) if b < total => (b, false),
            _ => (total, true),
        }
    }
}

fn require_table(table: &FTable, k: u64) -> Result<()> {
    if table.max_k() < k {
        return Err(Error::Capability(format!(
            "F table holds k <= {}, need {k}",
            table.max_k()
        )));
    }
    Ok(())
}

fn require_dimension(n: u32, min: u32, what: &str) -> Result<()> {
    if n < min {
        return Err(Error::Precondition(format!("{what} needs n >= {min}, got {n}")));
    }
    Ok(())
}

/// The potential bound for a family of `size` in `Q_n`: `2F(|A|)` when
/// `|A| <= 2^{n-1}`, otherwise `2F(|A|) + 2|A| - 2^n`.
pub fn potential_bound(table: &FTable, n: u32, size: u64) -> i64 {
    let base = 2 * table.get(size) as i64;
    if size <= 1u64 << n >> 1 {
        base
    } else {
        base + 2 * size as i64 - (1i64 << n)
    }
}

/// Checks `f(A) <= 2F(|A|)` (or its large-size form) over all families of
/// `Q_n` or a sample of them. Witnesses record, per size, the smallest
/// slack `bound - f(A)` and how many families attain it.
pub fn check_theorem2(n: u32, cfg: &VerifyConfig, table: &FTable) -> Result<VerificationReport> {
    require_dimension(n, 1, "the potential bound")?;
    let mut report = VerificationReport::new(Statement::Theorem2, Some(n), cfg.mode, cfg.report_seed());
    let check = |tally: &mut Tally, size: u64, f: u64, family: &dyn Fn() -> Family| {
        let bound = potential_bound(table, n, size);
        let slack = bound - f as i64;
        tally.instances += 1;
        tally.observe(size, slack);
        if slack < 0 {
            tally.violation(format!("{} f={f} bound={bound}", family()));
        }
    };
    match cfg.mode {
        Mode::Exhaustive => {
            cfg.check_exhaustive("potential-bound search", n, 4)?;
            require_table(table, 1 << n)?;
            let (count, complete) = cfg.exhaustive_span(1u64 << (1u32 << n));
            report.complete = complete;
            report.tally = shard::run(count, shard::EXHAUSTIVE_SHARD, cfg.threads, |_, masks| {
                let mut tally = Tally::default();
                for word in masks {
                    let f = small::potential(word, n);
                    check(&mut tally, word.count_ones() as u64, f, &|| Family::from_small_word(n, word));
                }
                Ok(tally)
            })?;
        }
        Mode::Sampled => {
            require_table(table, 1 << n)?;
            report.tally = run_samples(cfg, |rng, tally| {
                let a = random_family_up_to(n, 1 << n, rng)?;
                check(tally, a.size(), a.potential(), &|| a.clone());
                Ok(())
            })?;
        }
    }
    Ok(report)
}

fn run_samples<F>(cfg: &VerifyConfig, sample: F) -> Result<Tally>
where
    F: Fn(&mut ChaCha8Rng, &mut Tally) -> Result<()> + Sync,
{
    shard::run(cfg.samples(), shard::SAMPLE_SHARD, cfg.threads, |s, range| {
        let mut rng = rng_for(cfg.seed, s);
        let mut tally = Tally::default();
        for _ in range {
            sample(&mut rng, &mut tally)?;
        }
        Ok(tally)
    })
}

/// Checks `|∂A| >= |∂(I_{n,|A|/2} ∪ Ī_{n,|A|/2})|` for antipodal `A`.
/// Witnesses record the smallest boundary per size; a complete exhaustive
/// run also requires that minimum to equal the bound for every even size.
pub fn check_theorem1(n: u32, cfg: &VerifyConfig) -> Result<VerificationReport> {
    require_dimension(n, 1, "the antipodal inequality")?;
    let rhs: Vec<u64> = extremal_profile(n)?.into_iter().map(|(_, b)| b).collect();
    let mut report = VerificationReport::new(Statement::Theorem1, Some(n), cfg.mode, cfg.report_seed());
    let check = |tally: &mut Tally, size: u64, boundary: u64, family: &dyn Fn() -> Family| {
        let bound = rhs[(size / 2) as usize];
        tally.instances += 1;
        tally.observe(size, boundary as i64);
        if boundary < bound {
            tally.violation(format!("{} boundary={boundary} rhs={bound}", family()));
        }
    };
    match cfg.mode {
        Mode::Exhaustive => {
            cfg.check_exhaustive("antipodal search", n, 5)?;
            let pairs = PairIndex::new(n)?;
            let (count, complete) = cfg.exhaustive_span(1u64 << pairs.len());
            report.complete = complete;
            report.tally = shard::run(count, shard::EXHAUSTIVE_SHARD, cfg.threads, |_, masks| {
                let mut tally = Tally::default();
                for mask in masks {
                    let word = pairs.word_from_mask(mask);
                    let size = word.count_ones() as u64;
                    let boundary = n as u64 * size - 2 * small::internal_edges(word, n);
                    check(&mut tally, size, boundary, &|| Family::from_small_word(n, word));
                }
                Ok(tally)
            })?;
            if complete {
                for (k, &bound) in rhs.iter().enumerate() {
                    let m = 2 * k as u64;
                    match report.tally.witnesses.get(&m) {
                        Some(w) if w.min == bound as i64 => report.tally.note("tight_sizes", 1),
                        other => report.tally.violation(format!(
                            "not tight at m={m}: min={} rhs={bound}",
                            other.map_or("none".into(), |w| w.min.to_string())
                        )),
                    }
                }
                report.tally = std::mem::take(&mut report.tally).finish();
            }
        }
        Mode::Sampled => {
            report.tally = run_samples(cfg, |rng, tally| {
                let k = rng.random_range(0..=1u64 << (n - 1));
                let a = sample_antipodal(n, 2 * k, rng)?;
                check(tally, a.size(), a.edge_boundary(), &|| a.clone());
                Ok(())
            })?;
        }
    }
    Ok(report)
}

/// Checks `F(x+y) - F(x) - F(y) >= min(x, y)` for all `0 <= x, y <= range`,
/// with equality required when `y` is a power of two and `x <= y`. Other
/// equality pairs are counted under the note `extra_equality_pairs`.
pub fn check_hart(range: u64, cfg: &VerifyConfig, table: &FTable) -> Result<VerificationReport> {
    require_table(table, 2 * range)?;
    let mut report = VerificationReport::new(Statement::Hart, None, Mode::Exhaustive, None);
    report.tally = shard::run(range + 1, 64, cfg.threads, |_, xs| {
        let mut tally = Tally::default();
        for x in xs {
            for y in 0..=range {
                tally.instances += 1;
                let gap = table.hart_gap(x, y);
                let min = x.min(y) as i64;
                let forced = (y.is_power_of_two() && x <= y) || (x.is_power_of_two() && y <= x);
                if gap < min {
                    tally.violation(format!("x={x} y={y} gap={gap} min={min}"));
                } else if forced && gap != min {
                    tally.violation(format!("x={x} y={y} gap={gap} expected equality"));
                } else if gap == min && !forced {
                    tally.note("extra_equality_pairs", 1);
                }
            }
        }
        Ok(tally)
    })?;
    Ok(report)
}

/// Checks the shifted Hart margin over its whole precondition region for
/// every `n` in `1..=max_n`. Witnesses are keyed by `n` and hold the
/// smallest margin seen.
pub fn check_hart_large(max_n: u32, cfg: &VerifyConfig, table: &FTable) -> Result<VerificationReport> {
    require_dimension(max_n, 1, "the shifted Hart margin")?;
    require_table(table, 1 << max_n)?;
    let mut report = VerificationReport::new(Statement::HartLarge, Some(max_n), Mode::Exhaustive, None);
    report.tally = shard::run(max_n as u64, 1, cfg.threads, |s, _| {
        let n = s as u32 + 1;
        let half = 1u64 << (n - 1);
        let mut tally = Tally::default();
        for y in half..=2 * half {
            for x in (y - half)..=(2 * half - y) {
                let margin = table.hart_large_margin(x, y, n)?;
                tally.instances += 1;
                tally.observe(n as u64, margin);
                if margin < 0 {
                    tally.violation(format!("n={n} x={x} y={y} margin={margin}"));
                }
            }
        }
        Ok(tally)
    })?;
    Ok(report)
}

/// Checks that every pair of coordinates `i < j` has
/// `min(||A_i^+| - |A_i^-||, ||A_j^+| - |A_j^-||) <= 2^{n-2}`.
pub fn check_balance(n: u32, cfg: &VerifyConfig) -> Result<VerificationReport> {
    require_dimension(n, 2, "the balanced-coordinate bound")?;
    let quarter = 1i64 << (n - 2);
    let mut report = VerificationReport::new(Statement::Balance, Some(n), cfg.mode, cfg.report_seed());
    let check = |tally: &mut Tally, imbalance: &[i64], family: &dyn Fn() -> Family| {
        tally.instances += 1;
        for i in 0..imbalance.len() {
            for j in i + 1..imbalance.len() {
                let m = imbalance[i].abs().min(imbalance[j].abs());
                if m > quarter {
                    tally.violation(format!("{} i={} j={} min_imbalance={m}", family(), i + 1, j + 1));
                }
            }
        }
    };
    match cfg.mode {
        Mode::Exhaustive => {
            cfg.check_exhaustive("balance search", n, 4)?;
            let (count, complete) = cfg.exhaustive_span(1u64 << (1u32 << n));
            report.complete = complete;
            report.tally = shard::run(count, shard::EXHAUSTIVE_SHARD, cfg.threads, |_, words| {
                let mut tally = Tally::default();
                let mut imbalance = vec![0i64; n as usize];
                for word in words {
                    for (d, slot) in imbalance.iter_mut().enumerate() {
                        *slot = small::section_imbalance(word, d as u32 + 1);
                    }
                    check(&mut tally, &imbalance, &|| Family::from_small_word(n, word));
                }
                Ok(tally)
            })?;
        }
        Mode::Sampled => {
            report.tally = run_samples(cfg, |rng, tally| {
                let a = random_family_up_to(n, 1 << n, rng)?;
                let imbalance = (1..=n)
                    .map(|i| {
                        Ok(a.section_size(i, Sign::Upper)? as i64 - a.section_size(i, Sign::Lower)? as i64)
                    })
                    .collect::<Result<Vec<_>>>()?;
                check(tally, &imbalance, &|| a.clone());
                Ok(())
            })?;
        }
    }
    Ok(report)
}

/// Operands of the cross-term inequality for a pair `(C, D)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossTerms {
    pub c_size: u64,
    pub d_size: u64,
    /// `|C ∩ C̄|`
    pub c_self: u64,
    /// `|D ∩ D̄|`
    pub d_self: u64,
    /// `|C ∩ D|`
    pub c_and_d: u64,
    /// `|C ∩ D̄|`
    pub c_and_dbar: u64,
}

impl CrossTerms {
    pub fn of(c: &Family, d: &Family) -> Result<Self> {
        let counts = c.counts(d)?;
        Ok(CrossTerms {
            c_size: c.size(),
            d_size: d.size(),
            c_self: c.self_antipodal_count(),
            d_self: d.self_antipodal_count(),
            c_and_d: counts.intersection,
            c_and_dbar: counts.with_antipodal,
        })
    }

    /// `|C∩C̄| + |D∩D̄| + 2 min(|C|,|D|) - 2|C∩D| - 2|C∩D̄|`, never negative.
    pub fn slack(&self) -> i64 {
        (self.c_self + self.d_self + 2 * self.c_size.min(self.d_size)) as i64
            - 2 * (self.c_and_d + self.c_and_dbar) as i64
    }
}

/// Checks the cross-term inequality over pairs `(C, D)` of families of
/// `Q_n`. Pairs with zero slack are counted under the note `tight_pairs`.
pub fn check_cross(n: u32, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(Statement::Cross, Some(n), cfg.mode, cfg.report_seed());
    let check = |tally: &mut Tally, terms: CrossTerms, pair: &dyn Fn() -> String| {
        tally.instances += 1;
        let slack = terms.slack();
        if slack == 0 {
            tally.note("tight_pairs", 1);
        }
        if slack < 0 {
            tally.violation(format!("{} slack={slack}", pair()));
        }
    };
    match cfg.mode {
        Mode::Exhaustive => {
            cfg.check_exhaustive("cross-term search", n, 3)?;
            let vertices = 1u32 << n;
            let (count, complete) = cfg.exhaustive_span(1u64 << (2 * vertices));
            report.complete = complete;
            let low = u64::MAX >> (64 - vertices);
            report.tally = shard::run(count, shard::EXHAUSTIVE_SHARD, cfg.threads, |_, pairs| {
                let mut tally = Tally::default();
                for p in pairs {
                    let (c, d) = (p >> vertices, p & low);
                    let (cbar, dbar) = (small::antipodal_image(c, n), small::antipodal_image(d, n));
                    let terms = CrossTerms {
                        c_size: c.count_ones() as u64,
                        d_size: d.count_ones() as u64,
                        c_self: (c & cbar).count_ones() as u64,
                        d_self: (d & dbar).count_ones() as u64,
                        c_and_d: (c & d).count_ones() as u64,
                        c_and_dbar: (c & dbar).count_ones() as u64,
                    };
                    check(&mut tally, terms, &|| {
                        format!(
                            "C=[{}] D=[{}]",
                            Family::from_small_word(n, c),
                            Family::from_small_word(n, d)
                        )
                    });
                }
                Ok(tally)
            })?;
        }
        Mode::Sampled => {
            report.tally = run_samples(cfg, |rng, tally| {
                let c = random_family_up_to(n, 1 << n, rng)?;
                let d = random_family_up_to(n, 1 << n, rng)?;
                check(tally, CrossTerms::of(&c, &d)?, &|| format!("C=[{c}] D=[{d}]"));
                Ok(())
            })?;
        }
    }
    Ok(report)
}

/// Residuals of the exact identities on one family and coordinate. All are
/// zero for every input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityResiduals {
    /// `2e(A) + |∂A| - n|A|`, with `|∂A|` counted directly.
    pub handshake: i64,
    /// `f(A^c) - f(A) - 2(n+1)(2^{n-1} - |A|)`
    pub complement_potential: i64,
    /// `e(A) - e(A_i^+) - e(A_i^-) - |A_i^+ ∩ A_i^-|`
    pub section_edges: i64,
    /// `f(A) - 2e(A_i^+) - 2e(A_i^-) - 2|A_i^+ ∩ A_i^-| - 2|A_i^+ ∩ Ā_i^-|`
    pub section_potential: i64,
}

impl IdentityResiduals {
    pub fn of(a: &Family, coord: u32) -> Result<Self> {
        let n = a.dimension() as i64;
        let size = a.size() as i64;
        let e = a.internal_edges() as i64;
        let f = a.potential() as i64;
        let (up, lo) = a.sections(coord)?;
        let counts = up.counts(&lo)?;
        let (e_up, e_lo) = (up.internal_edges() as i64, lo.internal_edges() as i64);
        let (cap, cross) = (counts.intersection as i64, counts.with_antipodal as i64);
        Ok(IdentityResiduals {
            handshake: 2 * e + a.edge_boundary_direct() as i64 - n * size,
            complement_potential: a.complement().potential() as i64
                - f
                - 2 * (n + 1) * ((1i64 << n >> 1) - size),
            section_edges: e - e_up - e_lo - cap,
            section_potential: f - 2 * e_up - 2 * e_lo - 2 * cap - 2 * cross,
        })
    }

    fn named(&self) -> [(&'static str, i64); 4] {
        [
            ("handshake", self.handshake),
            ("complement_potential", self.complement_potential),
            ("section_edges", self.section_edges),
            ("section_potential", self.section_potential),
        ]
    }
}

/// Checks the counting identities: the handshake identity, the complement
/// rule for `f`, the section decompositions of `e` and `f`, the complement
/// rule for `F` at every `k <= 2^n`, and `e(A) = f(A_n^+)` for antipodal
/// `A`. Instances count individual identity evaluations.
pub fn check_identities(n: u32, cfg: &VerifyConfig, table: &FTable) -> Result<VerificationReport> {
    require_dimension(n, 1, "the section identities")?;
    require_table(table, 1 << n)?;
    let mut report = VerificationReport::new(Statement::Identities, Some(n), cfg.mode, cfg.report_seed());
    let check = |tally: &mut Tally, a: &Family, coord: u32| -> Result<()> {
        for (name, residual) in IdentityResiduals::of(a, coord)?.named() {
            tally.instances += 1;
            if residual != 0 {
                tally.violation(format!("{name} {a} i={coord} residual={residual}"));
            }
        }
        Ok(())
    };
    let bridge = |tally: &mut Tally, a: &Family| -> Result<()> {
        tally.instances += 1;
        let upper = a.section(n, Sign::Upper)?;
        let residual = a.internal_edges() as i64 - upper.potential() as i64;
        if residual != 0 {
            tally.violation(format!("antipodal_bridge {a} residual={residual}"));
        }
        Ok(())
    };
    let mut tally = match cfg.mode {
        Mode::Exhaustive => {
            cfg.check_exhaustive("identity search", n, 3)?;
            let (count, complete) = cfg.exhaustive_span(1u64 << (1u32 << n));
            report.complete = complete;
            shard::run(count, shard::EXHAUSTIVE_SHARD, cfg.threads, |_, words| {
                let mut tally = Tally::default();
                for word in words {
                    let a = Family::from_small_word(n, word);
                    for coord in 1..=n {
                        check(&mut tally, &a, coord)?;
                    }
                    if a.is_antipodal() {
                        bridge(&mut tally, &a)?;
                    }
                }
                Ok(tally)
            })?
        }
        Mode::Sampled => run_samples(cfg, |rng, tally| {
            let a = random_family_up_to(n, 1 << n, rng)?;
            let coord = rng.random_range(1..=n);
            check(tally, &a, coord)?;
            let k = rng.random_range(0..=1u64 << (n - 1));
            bridge(tally, &sample_antipodal(n, 2 * k, rng)?)
        })?,
    };
    for k in 0..=1u64 << n {
        tally.instances += 1;
        let residual = table.complement_residual(k, n)?;
        if residual != 0 {
            tally.violation(format!("complement_f n={n} k={k} residual={residual}"));
        }
    }
    report.tally = tally.finish();
    Ok(report)
}

/// Smallest edge boundary over all families of size `m` in `Q_n` (or only
/// antipodal ones), with up to `max_witnesses` minimizers in enumeration
/// order.
pub fn minimize_boundary(
    n: u32,
    m: u64,
    antipodal_only: bool,
    max_witnesses: usize,
) -> Result<(u64, Vec<Family>)> {
    if n > 6 || m > 1u64 << n {
        return Err(Error::SizeOutOfRange { size: m, n });
    }
    let mut best = u64::MAX;
    let mut witnesses = Vec::new();
    let mut visit = |word: u64| {
        let boundary = n as u64 * m - 2 * small::internal_edges(word, n);
        if boundary < best {
            best = boundary;
            witnesses.clear();
        }
        if boundary == best && witnesses.len() < max_witnesses {
            witnesses.push(Family::from_small_word(n, word));
        }
    };
    if antipodal_only {
        if !m.is_multiple_of(2) {
            return Err(Error::OddSize(m));
        }
        if n > 5 {
            return Err(Error::Capability(format!("antipodal minimization is limited to n <= 5, got {n}")));
        }
        let pairs = PairIndex::new(n)?;
        for mask in (0..1u64 << pairs.len()).filter(|mask| mask.count_ones() as u64 == m / 2) {
            visit(pairs.word_from_mask(mask));
        }
    } else {
        if n > 4 {
            return Err(Error::Capability(format!("unrestricted minimization is limited to n <= 4, got {n}")));
        }
        for word in (0..1u64 << (1u32 << n)).filter(|w| w.count_ones() as u64 == m) {
            visit(word);
        }
    }
    Ok((best, witnesses))
}

/// `min |∂A|` for every size `0..=2^n` in one pass over the class; `None`
/// where the class has no family of that size (odd sizes when antipodal).
pub fn min_boundary_by_size(n: u32, antipodal_only: bool) -> Result<Vec<Option<u64>>> {
    let mut best = vec![None::<u64>; (1usize << n) + 1];
    let mut visit = |word: u64| {
        let size = word.count_ones() as u64;
        let boundary = n as u64 * size - 2 * small::internal_edges(word, n);
        let slot = &mut best[size as usize];
        *slot = Some(slot.map_or(boundary, |b| b.min(boundary)));
    };
    if antipodal_only {
        if n > 5 {
            return Err(Error::Capability(format!("antipodal minimization is limited to n <= 5, got {n}")));
        }
        let pairs = PairIndex::new(n)?;
        (0..1u64 << pairs.len()).for_each(|mask| visit(pairs.word_from_mask(mask)));
    } else {
        if n > 4 {
            return Err(Error::Capability(format!("unrestricted minimization is limited to n <= 4, got {n}")));
        }
        (0..1u64 << (1u32 << n)).for_each(&mut visit);
    }
    Ok(best)
}
