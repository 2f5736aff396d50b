use crate::field::{int, ComplexRational};
use crate::hypersurface::{Hypersurface, HypersurfaceParams};
use crate::poly::{HoloPoly, Monomial, Var};

/// Tangent field `L = a d/dw + b d/dz` of the Segre variety
/// `Q_(xi, eta)`, with `xibar`, `etabar` as parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct CRField {
    a_coeff: HoloPoly,
    b_coeff: HoloPoly,
}

impl CRField {
    /// `a = d rho/dz`, `b = -d rho/dw` of the complexified defining function.
    pub fn of(h: &Hypersurface) -> Self {
        let r = h.complexified();
        Self {
            a_coeff: r.derivative(Var::Z),
            b_coeff: -&r.derivative(Var::W),
        }
    }

    /// The `M_eps` field written out term by term:
    ///
    /// ```text
    /// a = 4 eps0 xb^4 z^3 + (7 c eps0 / 2) xb z^6 + (c eps0 / 2) xb^7 + 5 xb^5 z^4 + eps xb
    /// b = -etabar
    /// ```
    pub fn family(params: &HypersurfaceParams) -> Self {
        let (e0, c, eps) = (params.eps0(), params.c(), params.eps());
        let q = |r| ComplexRational::real(r);
        let m = |xb: u16, z: u16| Monomial::from_pairs(&[(Var::XiBar, xb), (Var::Z, z)]);
        let mut a = HoloPoly::zero();
        a.add_term(m(4, 3), q(e0 * int(4)));
        a.add_term(m(1, 6), q(int(7) * c * e0 / int(2)));
        a.add_term(m(7, 0), q(c * e0 / int(2)));
        a.add_term(m(5, 4), q(int(5)));
        a.add_term(m(1, 0), q(eps.clone()));
        Self {
            a_coeff: a,
            b_coeff: -&HoloPoly::var(Var::EtaBar),
        }
    }

    /// Coefficient of `d/dw`.
    pub fn a_coeff(&self) -> &HoloPoly {
        &self.a_coeff
    }

    /// Coefficient of `d/dz`.
    pub fn b_coeff(&self) -> &HoloPoly {
        &self.b_coeff
    }

    pub fn apply(&self, g: &HoloPoly) -> HoloPoly {
        &(&self.a_coeff * &g.derivative(Var::W)) + &(&self.b_coeff * &g.derivative(Var::Z))
    }
}

/// `L^order g`; `order = 0` returns `g`.
pub fn apply_l(field: &CRField, g: &HoloPoly, order: usize) -> HoloPoly {
    (0..order).fold(g.clone(), |acc, _| field.apply(&acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypersurface::make_family;

    #[test]
    fn family_field_matches_derivative_and_is_tangent() {
        let params = HypersurfaceParams::canonical();
        let h = make_family(&params);
        let l = CRField::family(&params);
        assert_eq!(l, CRField::of(&h));
        assert!(l.apply(h.complexified()).is_zero());
        let m0 = crate::hypersurface::kohn_nirenberg_limit(&params);
        assert!(CRField::of(&m0).apply(m0.complexified()).is_zero());
    }

    #[test]
    fn field_on_coordinates() {
        let params = HypersurfaceParams::canonical();
        let l = CRField::family(&params);
        assert_eq!(l.apply(&HoloPoly::var(Var::W)), *l.a_coeff());
        assert_eq!(l.apply(&HoloPoly::var(Var::Z)), -&HoloPoly::var(Var::EtaBar));
        let z2 = HoloPoly::var(Var::Z).pow(2);
        let eb2 = HoloPoly::var(Var::EtaBar).pow(2).scale(&ComplexRational::from_ints(2, 0));
        assert_eq!(apply_l(&l, &z2, 2), eb2);
        assert_eq!(apply_l(&l, &z2, 0), z2);
    }
}
