use std::fmt;

/// Every axiom either checker knows, in schedule order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axiom {
    /// `f(i) < f(i+1)`, and `β < γ` implies `aβ < aγ`.
    Monotone,
    /// `f(i) >= i`.
    Inflationary,
    /// `id·a = a`, `a·id = id` (and for compositions `a o id = id o a = a`,
    /// `id(γ) = γ`).
    Identity,
    /// `a(bc) = (ab)(ac)`.
    Ld,
    /// `a(crit a) > crit a`.
    CritMoves,
    /// `aγ = γ` for `γ < crit a`.
    FixedBelowCrit,
    /// `crit(ab) = a(crit b)` for `b != id`.
    Crit,
    /// `ab(aγ) = a(bγ)`.
    Coherence,
    /// `(a o b) o c = a o (b o c)`.
    SigmaAssoc,
    /// `(a o b)c = a(bc)`.
    SigmaComposeApply,
    /// `a(b o c) = ab o ac`.
    SigmaApplyCompose,
    /// `a o b = ab o a`.
    SigmaExchange,
    /// `(a o b)γ = a(bγ)`.
    ComposeApplication,
    /// `crit(a o b) = min(crit a, crit b)`.
    ComposeCrit,
    /// The ordinals are linearly ordered.
    LinearOrder,
    /// `a ≡_γ b` and `b ≡_γ c` give `a ≡_γ c`.
    EquivTransitive,
    /// `a ≡_γ a'` gives `ab ≡_γ a'b`, `ba ≡_γ ba'`, `a o b ≡_γ a' o b`
    /// and `b o a ≡_γ b o a'`.
    EquivRespects,
    /// `γ <= δ` and `a ≡_δ b` give `a ≡_γ b`.
    EquivMonotone,
    /// `a ≡_γ b` and `aδ < γ` give `aδ = bδ`.
    EquivAgreement,
    /// `a ≡_{crit a} id`.
    EquivCrit,
    /// `a ≡_γ b` gives `ca ≡_{cγ} cb`.
    EquivCoherence,
    /// `crit a > b_1…b_k γ` gives `a b_1…b_k γ = b_1…b_k γ`.
    FixedUnderSmallImage,
    /// `crit a > a b_1…b_k γ` gives `a b_1…b_k γ = b_1…b_k γ`.
    FixedUnderSmallValue,
    /// `crit a` is the least ordinal moved by `a`.
    LeastMoved,
    /// Critical sequence of `a` dominates that of the generator termwise.
    CritSequenceDominates,
    /// `aγ > γ` for every critical point `γ >= crit a`.
    MovesAboveCrit,
    /// Critical sequence of `a` is cofinal in the critical points.
    CritSequenceCofinal,
    /// An element of depth at most `n` maps `κ_n` to `κ_{n+1}`.
    DepthMapsKappa,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Axiom::*;
        f.write_str(match self {
            Monotone => "monotone",
            Inflationary => "inflationary",
            Identity => "identity",
            Ld => "ld",
            CritMoves => "crit-moves",
            FixedBelowCrit => "fixed-below-crit",
            Crit => "crit",
            Coherence => "coherence",
            SigmaAssoc => "sigma-assoc",
            SigmaComposeApply => "sigma-compose-apply",
            SigmaApplyCompose => "sigma-apply-compose",
            SigmaExchange => "sigma-exchange",
            ComposeApplication => "compose-application",
            ComposeCrit => "compose-crit",
            LinearOrder => "linear-order",
            EquivTransitive => "equiv-transitive",
            EquivRespects => "equiv-respects",
            EquivMonotone => "equiv-monotone",
            EquivAgreement => "equiv-agreement",
            EquivCrit => "equiv-crit",
            EquivCoherence => "equiv-coherence",
            FixedUnderSmallImage => "fixed-under-small-image",
            FixedUnderSmallValue => "fixed-under-small-value",
            LeastMoved => "least-moved",
            CritSequenceDominates => "crit-sequence-dominates",
            MovesAboveCrit => "moves-above-crit",
            CritSequenceCofinal => "crit-sequence-cofinal",
            DepthMapsKappa => "depth-maps-kappa",
        })
    }
}

/// Why an instance could not be evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Reason {
    MissingOp,
    PrefixTooShort,
    NoCriticalPoint,
    BfsBudget,
    Disabled,
    NoGenerator,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reason::MissingOp => "missing-op",
            Reason::PrefixTooShort => "prefix-too-short",
            Reason::NoCriticalPoint => "no-critical-point",
            Reason::BfsBudget => "bfs-budget",
            Reason::Disabled => "disabled",
            Reason::NoGenerator => "no-generator",
        })
    }
}

/// Embeddings (as lists of parts; empty is `id`) and ordinals naming one
/// instance of an axiom, in the order the axiom quantifies them.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Instance {
    pub elements: Vec<Vec<String>>,
    pub ordinals: Vec<u64>,
}

impl Instance {
    pub fn new(elements: Vec<Vec<String>>, ordinals: Vec<u64>) -> Self {
        Instance { elements, ordinals }
    }

    /// Instance whose embeddings are all single names.
    pub fn named(names: &[&str], ordinals: Vec<u64>) -> Self {
        Instance {
            elements: names.iter().map(|n| vec![n.to_string()]).collect(),
            ordinals,
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items: Vec<String> = self
            .elements
            .iter()
            .map(|e| {
                if e.is_empty() {
                    super::ID.to_string()
                } else {
                    e.join(" o ")
                }
            })
            .collect();
        items.extend(self.ordinals.iter().map(u64::to_string));
        write!(f, "({})", items.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomStatus {
    /// Holds on every evaluated instance (possibly none).
    Verified(u64),
    /// The first failing instance in enumeration order.
    Refuted(Instance),
    /// Instances exist but none could be evaluated.
    Unchecked(Reason),
}

impl fmt::Display for AxiomStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomStatus::Verified(n) => write!(f, "verified {n}"),
            AxiomStatus::Refuted(i) => write!(f, "refuted {i}"),
            AxiomStatus::Unchecked(r) => write!(f, "unchecked {r}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomEntry {
    pub axiom: Axiom,
    pub status: AxiomStatus,
    pub skipped: u64,
    /// The skipped instances, truncated to the recording limit.
    pub skipped_instances: Vec<(Instance, Reason)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AxiomReport {
    pub entries: Vec<AxiomEntry>,
}

impl AxiomReport {
    pub fn entry(&self, axiom: Axiom) -> Option<&AxiomEntry> {
        self.entries.iter().find(|e| e.axiom == axiom)
    }

    pub fn status(&self, axiom: Axiom) -> Option<&AxiomStatus> {
        self.entry(axiom).map(|e| &e.status)
    }

    pub fn refuted(&self) -> impl Iterator<Item = &AxiomEntry> {
        self.entries
            .iter()
            .filter(|e| matches!(e.status, AxiomStatus::Refuted(_)))
    }

    pub fn any_refuted(&self) -> bool {
        self.refuted().next().is_some()
    }

    pub fn all_verified(&self) -> bool {
        self.entries
            .iter()
            .all(|e| matches!(e.status, AxiomStatus::Verified(_)))
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            write!(f, "{} {}", e.axiom, e.status)?;
            if e.skipped > 0 {
                write!(f, " skipped {}", e.skipped)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Verdict {
    Holds,
    Fails,
    /// The hypothesis of an implication is false; nothing is counted.
    Vacuous,
    Skip(Reason),
}

impl Verdict {
    pub(crate) fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Holds
        } else {
            Verdict::Fails
        }
    }
}

/// Accumulates verdicts for one axiom; stops at the first failure.
pub(crate) struct Tally {
    axiom: Axiom,
    checked: u64,
    skipped: u64,
    limit: usize,
    first_reason: Option<Reason>,
    skipped_instances: Vec<(Instance, Reason)>,
    refuted: Option<Instance>,
}

impl Tally {
    pub(crate) fn new(axiom: Axiom, limit: usize) -> Self {
        Tally {
            axiom,
            checked: 0,
            skipped: 0,
            limit,
            first_reason: None,
            skipped_instances: Vec::new(),
            refuted: None,
        }
    }

    pub(crate) fn done(&self) -> bool {
        self.refuted.is_some()
    }

    /// Records a verdict; `instance` is only built when it must be kept.
    pub(crate) fn record(&mut self, verdict: Verdict, instance: impl FnOnce() -> Instance) {
        if self.done() {
            return;
        }
        match verdict {
            Verdict::Holds => self.checked += 1,
            Verdict::Vacuous => {}
            Verdict::Fails => self.refuted = Some(instance()),
            Verdict::Skip(r) => {
                self.skipped += 1;
                self.first_reason.get_or_insert(r);
                if self.skipped_instances.len() < self.limit {
                    self.skipped_instances.push((instance(), r));
                }
            }
        }
    }

    pub(crate) fn finish(self) -> AxiomEntry {
        let status = match (self.refuted, self.first_reason) {
            (Some(i), _) => AxiomStatus::Refuted(i),
            (None, Some(r)) if self.checked == 0 => AxiomStatus::Unchecked(r),
            _ => AxiomStatus::Verified(self.checked),
        };
        AxiomEntry {
            axiom: self.axiom,
            status,
            skipped: self.skipped,
            skipped_instances: self.skipped_instances,
        }
    }
}
