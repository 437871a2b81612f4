//! Finite groups given by Cayley tables, and their two Q-systems.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{ComplexMatrix, C64};

use super::QSystem;

/// A finite group on `{0, .., order − 1}` with `cayley[g][h] = gh`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupJson", into = "GroupJson")]
pub struct FiniteGroup {
    order: usize,
    cayley: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GroupJson {
    order: usize,
    cayley: Vec<Vec<usize>>,
}

impl TryFrom<GroupJson> for FiniteGroup {
    type Error = Error;
    fn try_from(g: GroupJson) -> Result<Self> {
        if g.cayley.len() != g.order {
            return Err(Error::InvalidGroup(format!(
                "order {} but {} table rows",
                g.order,
                g.cayley.len()
            )));
        }
        FiniteGroup::new(g.cayley)
    }
}

impl From<FiniteGroup> for GroupJson {
    fn from(g: FiniteGroup) -> Self {
        GroupJson {
            order: g.order,
            cayley: g.cayley,
        }
    }
}

impl FiniteGroup {
    /// Validates closure, associativity, identity and inverses.
    pub fn new(cayley: Vec<Vec<usize>>) -> Result<Self> {
        let n = cayley.len();
        if n == 0 {
            return Err(Error::InvalidGroup("empty table".into()));
        }
        for (g, row) in cayley.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidGroup(format!("row {g} has length {}", row.len())));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::InvalidGroup(format!("entry {x} out of range in row {g}")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]] {
                        return Err(Error::InvalidGroup(format!("({a}{b}){c} ≠ {a}({b}{c})")));
                    }
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| cayley[e][g] == g && cayley[g][e] == g))
            .ok_or_else(|| Error::InvalidGroup("no identity element".into()))?;
        let mut inverse = Vec::with_capacity(n);
        for (g, row) in cayley.iter().enumerate() {
            let inv = (0..n)
                .find(|&h| row[h] == identity && cayley[h][g] == identity)
                .ok_or_else(|| Error::InvalidGroup(format!("element {g} has no inverse")))?;
            inverse.push(inv);
        }
        Ok(Self {
            order: n,
            cayley,
            identity,
            inverse,
        })
    }

    pub fn cyclic(n: usize) -> Self {
        Self::new((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect()).expect("Z_n is a group")
    }

    /// Symmetric group on `k` letters; elements are permutations in
    /// lexicographic order, `(στ)(i) = σ(τ(i))`.
    pub fn symmetric(k: usize) -> Self {
        let perms = permutations(k);
        let index = |p: &Vec<usize>| perms.iter().position(|q| q == p).expect("closed under composition");
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| index(&t.iter().map(|&i| s[i]).collect()))
                    .collect()
            })
            .collect();
        Self::new(table).expect("S_k is a group")
    }

    /// Dihedral group of order `2n`: `r^a s^b ↦ a + n·b`.
    pub fn dihedral(n: usize) -> Self {
        let elem = |a: usize, b: usize| a % n + n * b;
        let table = (0..2 * n)
            .map(|x| {
                let (a1, b1) = (x % n, x / n);
                (0..2 * n)
                    .map(|y| {
                        let (a2, b2) = (y % n, y / n);
                        // r^a1 s^b1 r^a2 s^b2 = r^(a1 ± a2) s^(b1 + b2)
                        let a = if b1 == 0 { a1 + a2 } else { a1 + n - a2 };
                        elem(a, (b1 + b2) % 2)
                    })
                    .collect()
            })
            .collect();
        Self::new(table).expect("D_n is a group")
    }

    /// `Z<n>`, `S<k>` (k ≤ 5) or `D<n>`.
    pub fn by_name(name: &str) -> Result<Self> {
        let bad = || Error::InvalidGroup(format!("unknown group name {name:?}"));
        let (kind, rest) = name.split_at(name.char_indices().nth(1).map_or(name.len(), |(i, _)| i));
        let k: usize = rest.parse().map_err(|_| bad())?;
        match kind {
            "Z" | "C" if k >= 1 => Ok(Self::cyclic(k)),
            "S" if (1..=5).contains(&k) => Ok(Self::symmetric(k)),
            "D" if k >= 1 => Ok(Self::dihedral(k)),
            _ => Err(bad()),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.cayley[g][h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn cayley(&self) -> &[Vec<usize>] {
        &self.cayley
    }

    /// Left regular representation `λ(g) δ_h = δ_{gh}`.
    pub fn regular_representation(&self, g: usize) -> ComplexMatrix {
        let mut u = ComplexMatrix::zeros(self.order, self.order);
        for h in 0..self.order {
            u[(self.mul(g, h), h)] = C64::new(1.0, 0.0);
        }
        u
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in 0..k {
        for rest in permutations(k - 1) {
            let mut p = vec![first];
            p.extend(rest.into_iter().map(|x| if x >= first { x + 1 } else { x }));
            out.push(p);
        }
    }
    out
}

/// Pointwise multiplication on `C(G)` with `⟨ψ₁, ψ₂⟩ = |G|⁻¹ Σ ψ̄₁ψ₂`.
///
/// Coordinates are taken in the orthonormal basis `u_g = |G|^{1/2} δ_g`, in
/// which `m(u_g ⊗ u_h) = δ_{g,h} |G|^{1/2} u_g` and `ι = |G|^{-1/2} Σ u_g`.
/// See [`functions_to_coords`] for the change of basis.
pub fn qsystem_functions_on_group(g: &FiniteGroup) -> QSystem {
    let n = g.order();
    let root = (n as f64).sqrt();
    let mut m = ComplexMatrix::zeros(n, n * n);
    for k in 0..n {
        m[(k, k * n + k)] = C64::new(root, 0.0);
    }
    let iota = vec![C64::new(1.0 / root, 0.0); n];
    QSystem::new(m, iota).expect("consistent shapes")
}

/// Coordinates of a function `ψ = Σ ψ(g) δ_g` in the basis `u_g`.
pub fn functions_to_coords(psi: &[C64]) -> Vec<C64> {
    let root = (psi.len() as f64).sqrt();
    psi.iter().map(|z| z / root).collect()
}

/// Inverse of [`functions_to_coords`].
pub fn coords_to_functions(c: &[C64]) -> Vec<C64> {
    let root = (c.len() as f64).sqrt();
    c.iter().map(|z| z * root).collect()
}

/// Matrix of a multiplication `C(G) ⊗ C(G) → C(G)` with respect to the
/// unnormalized `δ_g` bases: `m(δ_g ⊗ δ_h) = Σ_k M[k, g|G| + h] δ_k`.
pub fn multiplication_in_delta_basis(q: &QSystem) -> ComplexMatrix {
    // δ_g = |G|^{-1/2} u_g on both sides, so a map X⊗X → X picks up |G|^{-1/2}
    let n = q.dim();
    q.m().scale_real(1.0 / (n as f64).sqrt())
}

/// Convolution on `L¹(G)` with `⟨ψ₁, ψ₂⟩ = Σ ψ̄₁ψ₂`: `m(δ_g ⊗ δ_h) = δ_{gh}`,
/// `ι = δ_e`.
pub fn qsystem_group_algebra(g: &FiniteGroup) -> QSystem {
    let n = g.order();
    let mut m = ComplexMatrix::zeros(n, n * n);
    for a in 0..n {
        for b in 0..n {
            m[(g.mul(a, b), a * n + b)] = C64::new(1.0, 0.0);
        }
    }
    let mut iota = vec![C64::new(0.0, 0.0); n];
    iota[g.identity()] = C64::new(1.0, 0.0);
    QSystem::new(m, iota).expect("consistent shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qsystem::{derived_data, validate};
    use crate::tensor::matrix::basis_vector;

    #[test]
    fn group_tables() {
        assert_eq!(FiniteGroup::cyclic(4).order(), 4);
        let s3 = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        // non-abelian
        assert!((0..6).any(|a| (0..6).any(|b| s3.mul(a, b) != s3.mul(b, a))));
        assert_eq!(FiniteGroup::dihedral(3).order(), 6);
        assert_eq!(FiniteGroup::by_name("S3").unwrap(), s3);
        assert!(FiniteGroup::by_name("Q8").is_err());
        assert!(FiniteGroup::by_name("Zx").is_err());
    }

    #[test]
    fn rejects_non_groups() {
        assert!(FiniteGroup::new(vec![vec![0, 0], vec![0, 0]]).is_err());
        assert!(FiniteGroup::new(vec![vec![0, 2], vec![1, 0]]).is_err());
        assert!(FiniteGroup::new(vec![]).is_err());
        // a Latin square without associativity
        let t = vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 0]];
        assert!(FiniteGroup::new(t).is_err());
    }

    #[test]
    fn group_json() {
        let g: FiniteGroup = serde_json::from_str(r#"{"order": 2, "cayley": [[0,1],[1,0]]}"#).unwrap();
        assert_eq!(g, FiniteGroup::cyclic(2));
        assert!(serde_json::from_str::<FiniteGroup>(r#"{"order": 3, "cayley": [[0,1],[1,0]]}"#).is_err());
    }

    #[test]
    fn functions_on_z2_twist() {
        let q = qsystem_functions_on_group(&FiniteGroup::cyclic(2));
        let t = derived_data(&q).unwrap().t;
        // the operator matrix is the same in the u and δ bases
        let ee = t.mat().apply(&basis_vector(4, 0));
        let two = crate::tensor::matrix::basis_vector(4, 0).iter().map(|z| z * 2.0).collect::<Vec<_>>();
        assert!(crate::tensor::vec_distance(&ee, &two) < 1e-14);
        assert!(t.mat().apply(&basis_vector(4, 1)).iter().all(|z| z.norm() < 1e-15));
        assert!((t.mat()[(3, 3)] - C64::new(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn functions_delta_basis() {
        let g = FiniteGroup::cyclic(3);
        let q = qsystem_functions_on_group(&g);
        let md = multiplication_in_delta_basis(&q);
        // δ_g δ_h = δ_{g,h} δ_g
        for a in 0..3 {
            for b in 0..3 {
                for k in 0..3 {
                    let want = if a == b && k == a { 1.0 } else { 0.0 };
                    assert!((md[(k, a * 3 + b)].re - want).abs() < 1e-14);
                }
            }
        }
        let one = vec![C64::new(1.0, 0.0); 3];
        let c = functions_to_coords(&one);
        assert!(crate::tensor::vec_distance(&c, q.iota()) < 1e-15);
        assert!(crate::tensor::vec_distance(&coords_to_functions(&c), &one) < 1e-15);
    }

    #[test]
    fn group_algebra_z2_twist() {
        let q = qsystem_group_algebra(&FiniteGroup::cyclic(2));
        let t = derived_data(&q).unwrap().t;
        // δ_e⊗δ_e ↦ δ_e⊗δ_e + δ_a⊗δ_a
        let v = t.mat().apply(&basis_vector(4, 0));
        assert_eq!(v, vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
    }

    #[test]
    fn group_algebra_twist_formula() {
        let g = FiniteGroup::symmetric(3);
        let n = g.order();
        let t = derived_data(&qsystem_group_algebra(&g)).unwrap().t;
        for a in 0..n {
            for b in 0..n {
                let mut want = vec![C64::new(0.0, 0.0); n * n];
                for k in 0..n {
                    want[k * n + g.mul(g.inv(k), g.mul(a, b))] += C64::new(1.0, 0.0);
                }
                let got = t.mat().apply(&basis_vector(n * n, a * n + b));
                assert!(crate::tensor::vec_distance(&got, &want) < 1e-12);
            }
        }
    }

    #[test]
    fn group_algebra_involution_is_inversion() {
        let g = FiniteGroup::symmetric(3);
        let d = derived_data(&qsystem_group_algebra(&g)).unwrap();
        assert!(d.s.is_trivial_delta());
        for a in 0..6 {
            let j = d.s.j().apply(&basis_vector(6, a));
            assert!(crate::tensor::vec_distance(&j, &basis_vector(6, g.inv(a))) < 1e-12);
        }
        let r = validate(&qsystem_group_algebra(&FiniteGroup::cyclic(4)));
        assert!(r.passed());
        assert!((r.get("normalization").unwrap().residual) < 1e-15);
    }
}
