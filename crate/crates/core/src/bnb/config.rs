use std::time::Duration;

use crate::error::{Error, Result};
use crate::group::DEFAULT_ENUMERATION_CAP;
use crate::orbital::OrbitalCandidates;
use crate::prehandle::Placement;

/// Which symmetry propagators are active.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub struct ShcFlags {
    pub lexred: bool,
    pub orbitope: bool,
    pub orbital: bool,
    pub isoprune: bool,
}

impl ShcFlags {
    pub const NONE: ShcFlags = ShcFlags { lexred: false, orbitope: false, orbital: false, isoprune: false };

    /// Parses `none`, `lexred`, `orbitope`, `orbital`, `orbital+lexred`, `all`
    /// and any `+`-joined combination of the single names.
    pub fn parse(s: &str) -> Result<Self> {
        let mut f = ShcFlags::NONE;
        for part in s.split('+').map(str::trim) {
            match part {
                "none" => {}
                "lexred" => f.lexred = true,
                "orbitope" => f.orbitope = true,
                "orbital" => f.orbital = true,
                "isoprune" => f.isoprune = true,
                "all" => {
                    f.lexred = true;
                    f.orbitope = true;
                    f.orbital = true;
                }
                other => return Err(Error::InvalidConfig(format!("unknown symmetry method {other:?}"))),
            }
        }
        Ok(f)
    }

    pub fn any(&self) -> bool {
        self.lexred || self.orbitope || self.orbital || self.isoprune
    }

    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        if self.lexred {
            parts.push("lexred");
        }
        if self.orbitope {
            parts.push("orbitope");
        }
        if self.orbital {
            parts.push("orbital");
        }
        if self.isoprune {
            parts.push("isoprune");
        }
        if parts.is_empty() {
            "none".into()
        } else {
            parts.join("+")
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PrehandleChoice {
    Static,
    Branching,
    OrbitopeDynamic,
}

impl PrehandleChoice {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "static" => Ok(Self::Static),
            "branching" => Ok(Self::Branching),
            "orbitope-dynamic" => Ok(Self::OrbitopeDynamic),
            other => Err(Error::InvalidConfig(format!("unknown prehandling policy {other:?}"))),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Static => "static",
            Self::Branching => "branching",
            Self::OrbitopeDynamic => "orbitope-dynamic",
        }
    }
}

/// Symmetries fed to lexicographic reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LexredScope {
    Generators,
    /// Every element of the (enumerable) group; a complete scheme.
    Group,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BranchRule {
    /// Lowest-index unfixed integer variable.
    FirstUnfixed,
    /// Unfixed integer variable with the most values, lowest index on ties.
    WidestDomain,
    /// First unfixed variable of the list; nodes where none is left stay open.
    Script(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub shc: ShcFlags,
    pub prehandle: PrehandleChoice,
    pub placement: Placement,
    pub lexred_scope: LexredScope,
    pub orbital_candidates: OrbitalCandidates,
    pub bound_pruning: bool,
    pub model_propagation: bool,
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
    pub branch_rule: BranchRule,
    pub seed: u64,
    pub record_tree: bool,
    pub group_cap: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            shc: ShcFlags::NONE,
            prehandle: PrehandleChoice::Branching,
            placement: Placement::First,
            lexred_scope: LexredScope::Generators,
            orbital_candidates: OrbitalCandidates::Enumerated,
            bound_pruning: true,
            model_propagation: true,
            node_limit: None,
            time_limit: None,
            branch_rule: BranchRule::FirstUnfixed,
            seed: 0,
            record_tree: false,
            group_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

impl SolveConfig {
    pub fn with_shc(shc: ShcFlags) -> Self {
        SolveConfig { shc, ..Self::default() }
    }

    /// Orbital reduction needs the lexicographic constraints it relies on, and
    /// both orbital reduction and isomorphism pruning need a branching-based order.
    pub fn validate(&self) -> Result<()> {
        if self.shc.orbital && !self.shc.lexred {
            return Err(Error::InvalidConfig("orbital reduction requires lexred".into()));
        }
        if self.prehandle == PrehandleChoice::Static && (self.shc.orbital || self.shc.isoprune) {
            return Err(Error::InvalidConfig(
                "orbital reduction and isomorphism pruning need a branching-based prehandling policy".into(),
            ));
        }
        if self.group_cap == 0 {
            return Err(Error::InvalidConfig("group cap must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_flags() {
        assert_eq!(ShcFlags::parse("none").unwrap(), ShcFlags::NONE);
        let f = ShcFlags::parse("orbital+lexred").unwrap();
        assert!(f.orbital && f.lexred && !f.orbitope);
        let a = ShcFlags::parse("all").unwrap();
        assert_eq!(a.label(), "lexred+orbitope+orbital");
        assert!(ShcFlags::parse("bogus").is_err());
    }

    #[test]
    fn orbital_needs_lexred() {
        let mut c = SolveConfig::with_shc(ShcFlags::parse("orbital").unwrap());
        assert!(c.validate().is_err());
        c.shc.lexred = true;
        assert!(c.validate().is_ok());
        c.prehandle = PrehandleChoice::Static;
        assert!(c.validate().is_err());
    }
}
