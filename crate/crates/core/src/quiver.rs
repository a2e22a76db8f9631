//! Quivers with admissible automorphism and folding to Cartan data.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cartan::CartanDatum;
use crate::error::{Error, Result};

/// A finite quiver without loops. Arrow ids are positions in `arrows`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: usize,
    arrows: Vec<(usize, usize)>,
}

impl Quiver {
    pub fn new(vertices: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        for (h, &(s, t)) in arrows.iter().enumerate() {
            if s >= vertices || t >= vertices {
                return Err(Error::InvalidInput(format!(
                    "arrow {h} has an endpoint out of range"
                )));
            }
            if s == t {
                return Err(Error::LoopArrow(h));
            }
        }
        Ok(Self { vertices, arrows })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn is_sink(&self, v: usize) -> bool {
        self.arrows.iter().all(|&(s, _)| s != v)
    }

    pub fn is_source(&self, v: usize) -> bool {
        self.arrows.iter().all(|&(_, t)| t != v)
    }
}

/// A quiver with an admissible automorphism `a`, acting on vertices by
/// `vperm` and on arrows by `aperm`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverAut {
    quiver: Quiver,
    vperm: Vec<usize>,
    aperm: Vec<usize>,
    order: usize,
    orbits: Vec<Vec<usize>>,
    orbit_of: Vec<usize>,
}

/// The Cartan datum of a folded quiver together with the vertex-to-orbit map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Folding {
    pub datum: CartanDatum,
    /// `orbit_of[v]` is the index in `I` of the orbit containing vertex `v`.
    pub orbit_of: Vec<usize>,
    /// Orbit members in increasing order; orbits sorted by smallest member.
    pub orbits: Vec<Vec<usize>>,
}

fn check_permutation(p: &[usize], n: usize, what: &str) -> Result<()> {
    if p.len() != n {
        return Err(Error::InvalidPermutation(format!(
            "{what} has length {} but {n} entries are needed",
            p.len()
        )));
    }
    let mut seen = vec![false; n];
    for &x in p {
        if x >= n || seen[x] {
            return Err(Error::InvalidPermutation(format!(
                "{what} is not a bijection"
            )));
        }
        seen[x] = true;
    }
    Ok(())
}

fn cycle_lcm(p: &[usize]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut order = 1usize;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            x = p[x];
            len += 1;
        }
        order = order.lcm(&len);
    }
    order
}

/// Vertex orbits sorted by smallest member, and the orbit index of each
/// vertex; fails when an arrow stays inside one orbit.
fn vertex_orbits(quiver: &Quiver, vperm: &[usize]) -> Result<(Vec<Vec<usize>>, Vec<usize>)> {
    let mut orbit_of = vec![usize::MAX; quiver.vertices];
    let mut orbits = Vec::new();
    for v in 0..quiver.vertices {
        if orbit_of[v] != usize::MAX {
            continue;
        }
        let mut members = Vec::new();
        let mut x = v;
        while orbit_of[x] == usize::MAX {
            orbit_of[x] = orbits.len();
            members.push(x);
            x = vperm[x];
        }
        members.sort_unstable();
        orbits.push(members);
    }
    for (h, &(s, t)) in quiver.arrows.iter().enumerate() {
        if orbit_of[s] == orbit_of[t] {
            return Err(Error::NotAdmissible(h));
        }
    }
    Ok((orbits, orbit_of))
}

impl QuiverAut {
    /// Checks equivariance and admissibility.
    pub fn new(quiver: Quiver, vperm: Vec<usize>, aperm: Vec<usize>) -> Result<Self> {
        check_permutation(&vperm, quiver.vertices, "vertex permutation")?;
        check_permutation(&aperm, quiver.arrows.len(), "arrow permutation")?;
        let (orbits, orbit_of) = vertex_orbits(&quiver, &vperm)?;
        for (h, &(s, t)) in quiver.arrows.iter().enumerate() {
            let (s2, t2) = quiver.arrows[aperm[h]];
            if s2 != vperm[s] || t2 != vperm[t] {
                return Err(Error::NotCompatible(h));
            }
        }
        let order = cycle_lcm(&vperm).lcm(&cycle_lcm(&aperm));
        Ok(Self {
            quiver,
            vperm,
            aperm,
            order,
            orbits,
            orbit_of,
        })
    }

    /// Infers the arrow permutation from `vperm`. Parallel arrows are matched
    /// in the order they are listed.
    pub fn with_inferred_arrows(quiver: Quiver, vperm: Vec<usize>) -> Result<Self> {
        check_permutation(&vperm, quiver.vertices, "vertex permutation")?;
        vertex_orbits(&quiver, &vperm)?;
        let mut by_ends: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (h, &ends) in quiver.arrows.iter().enumerate() {
            by_ends.entry(ends).or_default().push(h);
        }
        let mut aperm = vec![0; quiver.arrows.len()];
        for (ends, hs) in &by_ends {
            let image = (vperm[ends.0], vperm[ends.1]);
            let targets = by_ends.get(&image);
            match targets {
                Some(ts) if ts.len() == hs.len() => {
                    for (&h, &t) in hs.iter().zip(ts) {
                        aperm[h] = t;
                    }
                }
                _ => return Err(Error::NotCompatible(hs[0])),
            }
        }
        Self::new(quiver, vperm, aperm)
    }

    /// The identity automorphism.
    pub fn trivial(quiver: Quiver) -> Self {
        let vperm = (0..quiver.vertices).collect();
        let aperm = (0..quiver.arrows.len()).collect();
        Self::new(quiver, vperm, aperm).expect("identity is admissible on loop-free quivers")
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn vperm(&self) -> &[usize] {
        &self.vperm
    }

    pub fn aperm(&self) -> &[usize] {
        &self.aperm
    }

    /// The order of the automorphism.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Vertex orbits, sorted by smallest member.
    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn orbit_of(&self, v: usize) -> usize {
        self.orbit_of[v]
    }

    fn orbit(&self, i: usize) -> Result<&[usize]> {
        self.orbits
            .get(i)
            .map(Vec::as_slice)
            .ok_or(Error::UnknownOrbit(i))
    }

    /// Folds to a Cartan datum with `eps_i = |i|` and
    /// `a_ij = -(arrows between orbits i and j) / |i|`.
    pub fn fold(&self) -> Folding {
        let n = self.orbits.len();
        let mut between = vec![vec![0i64; n]; n];
        for &(s, t) in &self.quiver.arrows {
            let (i, j) = (self.orbit_of[s], self.orbit_of[t]);
            between[i][j] += 1;
            between[j][i] += 1;
        }
        let eps: Vec<i64> = self.orbits.iter().map(|o| o.len() as i64).collect();
        let a = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            2
                        } else {
                            assert_eq!(between[i][j] % eps[i], 0, "orbit arrow counts are uniform");
                            -between[i][j] / eps[i]
                        }
                    })
                    .collect()
            })
            .collect();
        let datum = CartanDatum::new(a, eps).expect("folded matrices are symmetrizable GCMs");
        Folding {
            datum,
            orbit_of: self.orbit_of.clone(),
            orbits: self.orbits.clone(),
        }
    }

    pub fn orbit_is_sink(&self, i: usize) -> Result<bool> {
        Ok(self.orbit(i)?.iter().all(|&v| self.quiver.is_sink(v)))
    }

    pub fn orbit_is_source(&self, i: usize) -> Result<bool> {
        Ok(self.orbit(i)?.iter().all(|&v| self.quiver.is_source(v)))
    }

    /// Reverses every arrow incident to a vertex of orbit `i`.
    pub fn reflect(&self, i: usize) -> Result<QuiverAut> {
        let orbit = self.orbit(i)?;
        let arrows = self
            .quiver
            .arrows
            .iter()
            .map(|&(s, t)| {
                if orbit.contains(&s) || orbit.contains(&t) {
                    (t, s)
                } else {
                    (s, t)
                }
            })
            .collect();
        let mut out = self.clone();
        out.quiver.arrows = arrows;
        Ok(out)
    }
}

/// Orientation of the arrows between an unordered pair of orbits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Arrows point from the lower orbit index to the higher one.
    Forward,
    Backward,
}

/// Builds a quiver with automorphism whose folding is `c`.
///
/// Orbit `i` gets `eps_i` vertices numbered consecutively; the arrows between
/// orbits `i < j` come in `T / L` orbits of size `L = lcm(eps_i, eps_j)` with
/// `T = -eps_i a_ij`. Pairs missing from `orientation` default to
/// [`Orientation::Forward`].
pub fn unfold(c: &CartanDatum, orientation: &BTreeMap<(usize, usize), Orientation>) -> QuiverAut {
    let n = c.rank();
    let mut offset = Vec::with_capacity(n);
    let mut total = 0usize;
    for i in 0..n {
        offset.push(total);
        total += c.eps(i) as usize;
    }
    let vertex = |i: usize, s: i64| offset[i] + (s % c.eps(i)) as usize;
    let mut vperm = vec![0; total];
    for i in 0..n {
        for s in 0..c.eps(i) {
            vperm[vertex(i, s)] = vertex(i, s + 1);
        }
    }
    let mut arrows = Vec::new();
    let mut aperm = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if c.a(i, j) == 0 {
                continue;
            }
            let t = -c.eps(i) * c.a(i, j);
            let l = c.eps(i).lcm(&c.eps(j));
            assert_eq!(
                t % l,
                0,
                "symmetrizability makes T divisible by lcm(eps_i, eps_j)"
            );
            let forward = orientation
                .get(&(i, j))
                .copied()
                .unwrap_or(Orientation::Forward)
                == Orientation::Forward;
            for _ in 0..t / l {
                let base = arrows.len();
                for s in 0..l {
                    let (x, y) = (vertex(i, s), vertex(j, s));
                    arrows.push(if forward { (x, y) } else { (y, x) });
                    aperm.push(base + ((s + 1) % l) as usize);
                }
            }
        }
    }
    let quiver = Quiver::new(total, arrows).expect("unfolded arrows join distinct orbits");
    QuiverAut::new(quiver, vperm, aperm).expect("unfolded automorphism is admissible")
}

/// JSON form: `{"vertices": n, "arrows": [[s, t], ...], "vperm": [...], "aperm": [...]}`
/// with `aperm` optional.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct QuiverJson {
    pub vertices: usize,
    pub arrows: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vperm: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aperm: Option<Vec<usize>>,
}

impl QuiverJson {
    pub fn into_aut(self) -> Result<QuiverAut> {
        let quiver = Quiver::new(
            self.vertices,
            self.arrows.iter().map(|a| (a[0], a[1])).collect(),
        )?;
        let vperm = self.vperm.unwrap_or_else(|| (0..self.vertices).collect());
        match self.aperm {
            Some(aperm) => QuiverAut::new(quiver, vperm, aperm),
            None => QuiverAut::with_inferred_arrows(quiver, vperm),
        }
    }
}

impl From<&QuiverAut> for QuiverJson {
    fn from(q: &QuiverAut) -> Self {
        QuiverJson {
            vertices: q.quiver.vertices,
            arrows: q.quiver.arrows.iter().map(|&(s, t)| [s, t]).collect(),
            vperm: Some(q.vperm.clone()),
            aperm: Some(q.aperm.clone()),
        }
    }
}
