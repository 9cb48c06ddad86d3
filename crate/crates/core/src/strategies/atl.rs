use crate::cgm::{AgentMask, Cgm};
use crate::checker::{Checker, Extension};
use crate::error::{Error, Result};
use crate::syntax::*;

/// States where `mask` has a joint action whose outcomes all lie in `z`.
fn force(m: &Cgm, mask: AgentMask, z: &Extension) -> Extension {
    Extension::from_states(
        m.num_states(),
        (0..m.num_states()).filter(|&s| m.blocks(s, mask).outcomes.iter().any(|o| o.iter().all(|&u| z.contains(u)))),
    )
}

/// Classic ATL extension of `⟨⟨C⟩⟩θ` by forcing iteration.
pub fn atl_check(m: &Cgm, c: &Coalition, theta: &PathFormula) -> Result<Extension> {
    let mask = m.mask(c)?;
    let mut ch = Checker::new(m);
    let n = m.num_states();
    match theta {
        PathFormula::Next(f) => Ok(force(m, mask, &ch.extension(f)?)),
        PathFormula::Until(a, b) => {
            let (a, b) = (ch.extension(a)?, ch.extension(b)?);
            let mut z = Extension::empty(n);
            loop {
                let next = b.union(&a.intersection(&force(m, mask, &z)));
                if next == z {
                    return Ok(z);
                }
                z = next;
            }
        }
        PathFormula::Globally(f) => {
            let chi = ch.extension(f)?;
            let mut z = Extension::full(n);
            loop {
                let next = chi.intersection(&force(m, mask, &z));
                if next == z {
                    return Ok(z);
                }
                z = next;
            }
        }
        PathFormula::And(..) => Err(Error::Precondition("ATL goals cannot be conjunctions".into())),
    }
}
