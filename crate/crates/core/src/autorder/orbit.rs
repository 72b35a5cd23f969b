//! Extending the partial map along an increasing rational map that moves
//! every point up by more than a fixed margin.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::AutCondition;
use crate::structure::Elem;

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Increasing piecewise-linear map of ℚ through the knots, translating
/// outside them. Without knots it is `q ↦ q + shift`.
struct Pl {
    knots: Vec<(BigRational, BigRational)>,
    shift: i64,
}

impl Pl {
    fn eval(&self, q: &BigRational) -> BigRational {
        let Some(first) = self.knots.first() else {
            return q + int(self.shift);
        };
        let last = self.knots.last().unwrap();
        if *q <= first.0 {
            return q + (&first.1 - &first.0);
        }
        if *q >= last.0 {
            return q + (&last.1 - &last.0);
        }
        let i = self.knots.partition_point(|(x, _)| x <= q) - 1;
        let ((x0, y0), (x1, y1)) = (&self.knots[i], &self.knots[i + 1]);
        y0 + (q - x0) * (y1 - y0) / (x1 - x0)
    }

    fn inverse(&self) -> Pl {
        Pl {
            knots: self.knots.iter().map(|(x, y)| (y.clone(), x.clone())).collect(),
            shift: -self.shift,
        }
    }
}

/// Positions `0, 2, 4, …` along the chain and the map through `φ`. Each
/// knot moves up by at least 2, so the map moves every rational up by at
/// least 2 and the margin is 1.
fn embedding(p: &AutCondition) -> (BTreeMap<Elem, BigRational>, Pl) {
    let pos: BTreeMap<Elem, BigRational> = p
        .chain()
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, int(2 * i as i64)))
        .collect();
    let mut knots: Vec<(BigRational, BigRational)> =
        p.phi().iter().map(|(x, y)| (pos[x].clone(), pos[y].clone())).collect();
    knots.sort();
    (pos, Pl { knots, shift: 2 })
}

/// Rebuilds a condition from positioned points and extra map pairs. Points
/// at an existing position are that element; others get fresh ids in the
/// order they are listed.
struct Placed {
    by_pos: BTreeMap<BigRational, Elem>,
    used: BTreeSet<Elem>,
    next: Elem,
}

impl Placed {
    fn new(p: &AutCondition, pos: &BTreeMap<Elem, BigRational>) -> Self {
        Placed {
            by_pos: pos.iter().map(|(&x, q)| (q.clone(), x)).collect(),
            used: p.universe(),
            next: 0,
        }
    }

    fn at(&mut self, q: &BigRational) -> Elem {
        if let Some(&x) = self.by_pos.get(q) {
            return x;
        }
        while self.used.contains(&self.next) {
            self.next += 1;
        }
        let x = self.next;
        self.used.insert(x);
        self.by_pos.insert(q.clone(), x);
        x
    }

    fn finish(self, p: &AutCondition, pairs: impl IntoIterator<Item = (Elem, Elem)>) -> AutCondition {
        let chain = self.by_pos.into_values().collect();
        let mut phi = p.phi().clone();
        phi.extend(pairs);
        AutCondition::new(chain, phi).expect("the rational map extends phi monotonically")
    }
}

fn with_top(p: &AutCondition, xs: &[Elem]) -> AutCondition {
    let mut chain = p.chain().to_vec();
    for &x in xs {
        if !chain.contains(&x) {
            chain.push(x);
        }
    }
    AutCondition::new(chain, p.phi().clone()).expect("adding a top point keeps validity")
}

/// Least `k ≥ 0` with `φ^{-k}(α0) < β < φ^k(α0)`, all iterates defined.
pub fn straddle_index(p: &AutCondition, alpha0: Elem, beta: Elem) -> Option<usize> {
    if !p.contains(alpha0) || !p.contains(beta) {
        return None;
    }
    let inv = p.phi_inverse();
    let (mut up, mut down) = (alpha0, alpha0);
    for k in 0.. {
        if p.less(beta, up) && p.less(down, beta) {
            return Some(k);
        }
        up = *p.phi().get(&up)?;
        down = *inv.get(&down)?;
    }
    unreachable!()
}

pub fn orbit_satisfied(p: &AutCondition, alpha0: Elem, beta: Elem) -> bool {
    straddle_index(p, alpha0, beta).is_some()
}

/// A condition extending `p` in which the orbit of `alpha0` straddles
/// `beta`. Missing points are first added on top; the orbit is then pushed
/// along the rational map until it passes `beta` on both sides.
pub fn orbit_requirement_meet(p: &AutCondition, alpha0: Elem, beta: Elem) -> AutCondition {
    if orbit_satisfied(p, alpha0, beta) {
        return p.clone();
    }
    let p = with_top(p, &[alpha0, beta]);
    let (pos, psi) = embedding(&p);
    let back = psi.inverse();
    let target = &pos[&beta];
    let (mut fwd, mut bwd) = (vec![pos[&alpha0].clone()], vec![pos[&alpha0].clone()]);
    while !(fwd.last().unwrap() > target && bwd.last().unwrap() < target) {
        fwd.push(psi.eval(fwd.last().unwrap()));
        bwd.push(back.eval(bwd.last().unwrap()));
    }
    let mut placed = Placed::new(&p, &pos);
    let down: Vec<Elem> = bwd.iter().rev().map(|q| placed.at(q)).collect();
    let up: Vec<Elem> = fwd.iter().map(|q| placed.at(q)).collect();
    let orbit: Vec<Elem> = down.into_iter().chain(up.into_iter().skip(1)).collect();
    let pairs: Vec<(Elem, Elem)> = orbit.windows(2).map(|w| (w[0], w[1])).collect();
    placed.finish(&p, pairs)
}

/// Puts `m` into the domain of the map, adding its image if needed.
pub fn dom_meet(p: &AutCondition, m: Elem) -> AutCondition {
    if p.phi().contains_key(&m) {
        return p.clone();
    }
    let p = with_top(p, &[m]);
    let (pos, psi) = embedding(&p);
    let mut placed = Placed::new(&p, &pos);
    let y = placed.at(&psi.eval(&pos[&m]));
    placed.finish(&p, [(m, y)])
}

/// Puts `m` into the range of the map, adding its preimage if needed.
pub fn rng_meet(p: &AutCondition, m: Elem) -> AutCondition {
    if p.phi().values().any(|&y| y == m) {
        return p.clone();
    }
    let p = with_top(p, &[m]);
    let (pos, psi) = embedding(&p);
    let mut placed = Placed::new(&p, &pos);
    let x = placed.at(&psi.inverse().eval(&pos[&m]));
    placed.finish(&p, [(x, m)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::autorder::aut_stronger;

    #[test]
    fn map_moves_every_point_up() {
        let pl = Pl {
            knots: vec![(int(0), int(4)), (int(2), int(6)), (int(8), int(10))],
            shift: 2,
        };
        for n in -10..20 {
            let q = BigRational::new(BigInt::from(n), BigInt::from(3));
            assert!(pl.eval(&q) >= &q + int(2));
            assert_eq!(pl.inverse().eval(&pl.eval(&q)), q);
        }
    }

    #[test]
    fn single_point_orbit() {
        let p = AutCondition::new(vec![0], BTreeMap::new()).unwrap();
        let q = orbit_requirement_meet(&p, 0, 0);
        assert_eq!(straddle_index(&q, 0, 0), Some(1));
        assert!(q.less(0, q.phi()[&0]));
        assert!(aut_stronger(&q, &p));
        assert_eq!(orbit_requirement_meet(&q, 0, 0), q);
    }

    #[test]
    fn fresh_beta_is_straddled() {
        let p = AutCondition::new(vec![0], BTreeMap::new()).unwrap();
        let q = orbit_requirement_meet(&p, 0, 7);
        assert!(q.contains(7));
        let k = straddle_index(&q, 0, 7).unwrap();
        assert!(k >= 1);
        assert!(aut_stronger(&q, &p));
    }

    #[test]
    fn existing_map_is_followed() {
        // 0 < 1 < 2 < 3 with φ = {0 ↦ 2}; orbit of 1 must straddle 3
        let p = AutCondition::new(vec![0, 1, 2, 3], [(0, 2)].into()).unwrap();
        let q = orbit_requirement_meet(&p, 1, 3);
        assert!(orbit_satisfied(&q, 1, 3));
        assert!(aut_stronger(&q, &p));
    }

    #[test]
    fn domain_and_range() {
        let p = AutCondition::new(vec![0], BTreeMap::new()).unwrap();
        let q = rng_meet(&dom_meet(&p, 0), 0);
        assert_eq!(q.chain(), &[2, 0, 1]);
        assert_eq!(q.phi(), &[(0, 1), (2, 0)].into());
    }
}
