use crate::kernel::logic::alpha_eq;
use crate::kernel::{HypBody, Hypothesis, Obligation, ProofState};

/// Hypotheses match when their propositions are alpha-equal, whatever
/// their labels. Variable declarations match by name and sort, since the
/// name is what the goal refers to.
fn hyp_matches(a: &Hypothesis, b: &Hypothesis) -> bool {
    match (&a.body, &b.body) {
        (HypBody::Prop(p), HypBody::Prop(q)) => alpha_eq(p, q),
        (HypBody::Var(s), HypBody::Var(t)) => a.id == b.id && s == t,
        _ => false,
    }
}

/// `o1 ≥o o2`: same goal, and every hypothesis of `o1` is also one of `o2`.
pub fn harder_eq_obligation(o1: &Obligation, o2: &Obligation) -> bool {
    alpha_eq(&o1.goal, &o2.goal) && o1.hyps.iter().all(|h| o2.hyps.iter().any(|k| hyp_matches(h, k)))
}

/// `s1 ≥ s2`: every obligation of `s2` has an obligation of `s1` at least
/// as hard.
pub fn harder_eq_state(s1: &ProofState, s2: &ProofState) -> bool {
    s2.obligations.iter().all(|o2| {
        s1.obligations
            .iter()
            .any(|o1| harder_eq_obligation(&o1.obligation, &o2.obligation))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{parse_prop, OpenObligation};

    fn o(hyps: &[(&str, &str)], goal: &str) -> Obligation {
        Obligation::new(
            hyps.iter()
                .map(|(i, p)| Hypothesis::prop(i, parse_prop(p).unwrap()))
                .collect(),
            parse_prop(goal).unwrap(),
        )
    }

    fn st(obs: Vec<Obligation>) -> ProofState {
        ProofState {
            obligations: obs
                .into_iter()
                .map(|obligation| OpenObligation {
                    obligation,
                    history: vec![],
                })
                .collect(),
        }
    }

    #[test]
    fn fewer_assumptions_is_harder() {
        assert!(harder_eq_obligation(&o(&[], "A"), &o(&[("H", "B")], "A")));
        assert!(!harder_eq_obligation(&o(&[("H", "B")], "A"), &o(&[], "A")));
        assert!(harder_eq_obligation(&o(&[("H", "B")], "A"), &o(&[("H7", "B")], "A")));
        assert!(!harder_eq_obligation(&o(&[], "A"), &o(&[], "B")));
    }

    #[test]
    fn extra_obligation_is_harder() {
        let s2 = st(vec![o(&[], "A")]);
        let s1 = st(vec![o(&[], "A"), o(&[], "B")]);
        assert!(harder_eq_state(&s1, &s2));
        assert!(!harder_eq_state(&s2, &s1));
        assert!(harder_eq_state(&s1, &s1));
        assert!(harder_eq_state(&s1, &st(vec![])));
    }
}
