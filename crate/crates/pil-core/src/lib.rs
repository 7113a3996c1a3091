//! Core syntax for the PiL toolkit: variables, atoms, formulas, sequents with
//! stable occurrence positions, nominal stores, judgements, and the
//! variable-to-variable substitution algebra used by proof nets.

pub mod parse;
pub mod subst;
pub mod syntax;

pub use parse::{parse_formula, parse_sequent, ParseError};
pub use subst::{initial_witness, nominal_witness, Substitution, SubstitutionError, WitnessMap};
pub use syntax::{
    Atom, Connective, Context, Formula, Judgement, NomSort, Position, PositionError, Quantifier,
    Sequent, Store, StoreError, Variable,
};
