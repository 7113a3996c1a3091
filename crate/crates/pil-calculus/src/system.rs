//! Rule systems: which rules are available in which fragment.

use std::fmt;
use std::str::FromStr;

use crate::rules::RuleName;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum SystemId {
    Mll,
    Mll1u,
    Mall,
    Mall1,
    Nml,
    Nmal,
    MiniPil,
    PilMinus,
    Pil,
}

impl SystemId {
    pub const ALL: [SystemId; 9] = [
        SystemId::Mll,
        SystemId::Mll1u,
        SystemId::Mall,
        SystemId::Mall1,
        SystemId::Nml,
        SystemId::Nmal,
        SystemId::MiniPil,
        SystemId::PilMinus,
        SystemId::Pil,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SystemId::Mll => "MLL",
            SystemId::Mll1u => "MLL1u",
            SystemId::Mall => "MALL",
            SystemId::Mall1 => "MALL1",
            SystemId::Nml => "NML",
            SystemId::Nmal => "NMAL",
            SystemId::MiniPil => "miniPiL",
            SystemId::PilMinus => "PiLminus",
            SystemId::Pil => "PiL",
        }
    }

    /// The rules of the fragment, excluding the always-checkable macro `AX`
    /// and the cut rules governed by [`System`] flags.
    pub fn rules(self) -> Vec<RuleName> {
        use RuleName::*;
        let mll = vec![Ax, Par, Tensor];
        let mall = || {
            let mut r = mll.clone();
            r.extend([PlusI, With]);
            r
        };
        let seq_block = [Prec, Prec1, One, Mix];
        match self {
            SystemId::Mll => mll,
            SystemId::Mll1u => {
                let mut r = mll.clone();
                r.extend([One, Mix]);
                r
            }
            SystemId::Mall => mall(),
            SystemId::Mall1 => {
                let mut r = mall();
                r.extend([Forall, Exists]);
                r
            }
            SystemId::Nml => {
                let mut r = mll.clone();
                r.extend(seq_block);
                r
            }
            SystemId::Nmal => {
                let mut r = mall();
                r.extend(seq_block);
                r
            }
            SystemId::MiniPil => {
                let mut r = SystemId::Nmal.rules();
                r.extend([Exists, Forall, NewUnit, YaUnit, NewYa]);
                r
            }
            SystemId::PilMinus => {
                let mut r = SystemId::Nmal.rules();
                r.extend([Exists, Forall, NewUnit, YaUnit, NewLoad, NewPop]);
                r
            }
            SystemId::Pil => {
                let mut r = SystemId::Mall1.rules();
                r.extend(seq_block);
                r.extend([NewUnit, YaUnit, NewLoad, NewPop, YaLoad, YaPop]);
                r
            }
        }
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SystemId {
    type Err = String;

    fn from_str(s: &str) -> Result<SystemId, String> {
        SystemId::ALL
            .into_iter()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown system `{s}` (expected one of MLL, MLL1u, MALL, MALL1, NML, NMAL, miniPiL, PiLminus, PiL)"))
    }
}

/// A system plus the cut flags: cut rules are only ever checked, never
/// searched for.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct System {
    pub id: SystemId,
    pub allow_cut: bool,
    pub allow_store_cut: bool,
}

impl System {
    pub fn new(id: SystemId) -> System {
        System {
            id,
            allow_cut: false,
            allow_store_cut: false,
        }
    }

    pub fn with_cut(id: SystemId) -> System {
        System {
            id,
            allow_cut: true,
            allow_store_cut: true,
        }
    }

    pub fn pil() -> System {
        System::new(SystemId::Pil)
    }

    pub fn allows(&self, rule: RuleName) -> bool {
        match rule {
            RuleName::Cut => self.allow_cut,
            RuleName::StoreCut => self.allow_store_cut,
            // The general axiom is derivable and admitted as a checked macro.
            RuleName::AxGeneral => true,
            r => self.id.rules().contains(&r),
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id)?;
        if self.allow_cut {
            write!(f, "+cut")?;
        }
        if self.allow_store_cut {
            write!(f, "+store-cut")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use RuleName::*;

    #[test]
    fn system_table_matches_definition() {
        assert_eq!(SystemId::Mll.rules(), vec![Ax, Par, Tensor]);
        assert!(SystemId::Pil.rules().contains(&YaPop));
        assert!(!SystemId::PilMinus.rules().contains(&YaLoad));
        assert!(!SystemId::PilMinus.rules().contains(&YaPop));
        assert!(SystemId::PilMinus.rules().contains(&NewPop));
        assert!(SystemId::MiniPil.rules().contains(&NewYa));
        assert!(!SystemId::Pil.rules().contains(&NewYa));
        assert!(!SystemId::Mall.rules().contains(&One));
        assert!(SystemId::Nml.rules().contains(&Prec1));
    }

    #[test]
    fn cut_needs_flag() {
        let plain = System::pil();
        assert!(!plain.allows(Cut));
        assert!(!plain.allows(StoreCut));
        assert!(System::with_cut(SystemId::Pil).allows(Cut));
        assert!(plain.allows(AxGeneral));
    }

    #[test]
    fn parses_names() {
        assert_eq!("pil".parse::<SystemId>().unwrap(), SystemId::Pil);
        assert_eq!("MALL1".parse::<SystemId>().unwrap(), SystemId::Mall1);
        assert!("junk".parse::<SystemId>().is_err());
    }
}
