use std::fmt::{self, Display, Formatter, Write};

use super::ast::{Coalition, GoalAssignment, PathFormula, StateFormula};

const BINDER: u8 = 0;
const IMPLIES: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const NOT: u8 = 4;
const ATOM: u8 = 5;

fn prec(f: &StateFormula) -> u8 {
    match f {
        StateFormula::Mu(..) | StateFormula::Nu(..) => BINDER,
        StateFormula::Implies(..) => IMPLIES,
        StateFormula::Or(..) => OR,
        StateFormula::And(..) => AND,
        StateFormula::Not(_) => NOT,
        _ => ATOM,
    }
}

fn write_state(out: &mut Formatter<'_>, f: &StateFormula, min: u8) -> fmt::Result {
    let p = prec(f);
    if p < min {
        out.write_char('(')?;
        write_state(out, f, BINDER)?;
        return out.write_char(')');
    }
    match f {
        StateFormula::True => out.write_str("true"),
        StateFormula::False => out.write_str("false"),
        StateFormula::Prop(n) | StateFormula::Var(n) => out.write_str(n),
        StateFormula::Not(a) => {
            out.write_char('!')?;
            write_state(out, a, NOT)
        }
        StateFormula::And(a, b) => {
            write_state(out, a, AND)?;
            out.write_str(" & ")?;
            write_state(out, b, NOT)
        }
        StateFormula::Or(a, b) => {
            write_state(out, a, OR)?;
            out.write_str(" | ")?;
            write_state(out, b, AND)
        }
        StateFormula::Implies(a, b) => {
            write_state(out, a, OR)?;
            out.write_str(" -> ")?;
            write_state(out, b, IMPLIES)
        }
        StateFormula::Brak(ga) => write!(out, "{ga}"),
        StateFormula::Mu(z, a) => {
            write!(out, "mu {z} . ")?;
            write_state(out, a, BINDER)
        }
        StateFormula::Nu(z, a) => {
            write!(out, "nu {z} . ")?;
            write_state(out, a, BINDER)
        }
    }
}

impl Display for StateFormula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_state(f, self, BINDER)
    }
}

impl Display for PathFormula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            PathFormula::Next(a) => {
                f.write_str("X ")?;
                write_state(f, a, BINDER)
            }
            PathFormula::Globally(a) => {
                f.write_str("G ")?;
                write_state(f, a, BINDER)
            }
            PathFormula::Until(a, b) => {
                f.write_char('(')?;
                write_state(f, a, BINDER)?;
                f.write_str(" U ")?;
                write_state(f, b, BINDER)?;
                f.write_char(')')
            }
            PathFormula::And(a, b) => write!(f, "{a} && {b}"),
        }
    }
}

impl Display for Coalition {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_char('{')?;
        for (i, m) in self.members().enumerate() {
            if i > 0 {
                f.write_char(',')?;
            }
            f.write_str(m)?;
        }
        f.write_char('}')
    }
}

impl Display for GoalAssignment {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str("<<")?;
        for (i, (c, g)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{c} -> {g}")?;
        }
        f.write_str(">>")
    }
}
