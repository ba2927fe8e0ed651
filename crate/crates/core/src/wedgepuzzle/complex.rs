use std::fmt;
use std::str::FromStr;

use super::PuzzleError;

/// Copy `copy` of polygon vertex `vertex`, both 1-based; written `i_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label {
    pub vertex: usize,
    pub copy: usize,
}

impl Label {
    pub const fn new(vertex: usize, copy: usize) -> Self {
        Self { vertex, copy }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.vertex, self.copy)
    }
}

impl FromStr for Label {
    type Err = PuzzleError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PuzzleError::InvalidLabel(s.to_string());
        let (v, k) = s.split_once('_').unwrap_or((s, "1"));
        let vertex: usize = v.trim().parse().map_err(|_| bad())?;
        let copy: usize = k.trim().parse().map_err(|_| bad())?;
        if vertex == 0 || copy == 0 {
            return Err(bad());
        }
        Ok(Self { vertex, copy })
    }
}

/// Multiplicities `j_1, ..., j_m` of the iterated wedge of an m-gon.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WedgeSignature {
    j: Vec<usize>,
}

impl WedgeSignature {
    pub fn new(j: Vec<usize>) -> Result<Self, PuzzleError> {
        if j.len() < 3 {
            return Err(PuzzleError::InvalidSignature(format!(
                "need at least 3 polygon vertices, got {}",
                j.len()
            )));
        }
        if j.contains(&0) {
            return Err(PuzzleError::InvalidSignature(
                "multiplicities must be positive".into(),
            ));
        }
        Ok(Self { j })
    }

    /// The unwedged m-gon.
    pub fn polygon(m: usize) -> Result<Self, PuzzleError> {
        Self::new(vec![1; m])
    }

    pub fn m(&self) -> usize {
        self.j.len()
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.j
    }

    /// Multiplicity of a 1-based vertex.
    pub fn multiplicity(&self, vertex: usize) -> usize {
        self.j[vertex - 1]
    }

    /// Number of vertices of the wedged complex.
    pub fn d(&self) -> usize {
        self.j.iter().sum()
    }

    /// Dimension of the fan, which is also the facet size.
    pub fn fan_dimension(&self) -> usize {
        self.d() - self.m() + 2
    }

    pub fn labels(&self) -> Vec<Label> {
        self.j
            .iter()
            .enumerate()
            .flat_map(|(i, &ji)| (1..=ji).map(move |k| Label::new(i + 1, k)))
            .collect()
    }

    /// Copies beyond the first, in label order; one matrix row each.
    pub fn extra_labels(&self) -> Vec<Label> {
        self.labels().into_iter().filter(|l| l.copy > 1).collect()
    }

    /// Vertices of `G(J)`, the 1-skeleton of the product of simplices, in lexicographic order.
    pub fn grid_vertices(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for &ji in &self.j {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (1..=ji).map(move |k| {
                        let mut v = prefix.clone();
                        v.push(k);
                        v
                    })
                })
                .collect();
        }
        out
    }

    /// Edges of `G(J)` as `(color, from, to)` with `from[color] < to[color]`.
    pub fn grid_edges(&self) -> Vec<(usize, Vec<usize>, Vec<usize>)> {
        let mut edges = Vec::new();
        for alpha in self.grid_vertices() {
            for (i, &ji) in self.j.iter().enumerate() {
                for k in alpha[i] + 1..=ji {
                    let mut to = alpha.clone();
                    to[i] = k;
                    edges.push((i + 1, alpha.clone(), to));
                }
            }
        }
        edges
    }

    /// 2-faces of `G(J)` that are squares: `(colors, [α, α+i, α+j, α+i+j])`.
    pub fn grid_squares(&self) -> Vec<((usize, usize), [Vec<usize>; 4])> {
        let mut out = Vec::new();
        let m = self.m();
        for alpha in self.grid_vertices() {
            for i in 0..m {
                for j in i + 1..m {
                    for k in alpha[i] + 1..=self.j[i] {
                        for l in alpha[j] + 1..=self.j[j] {
                            let mut a = alpha.clone();
                            a[i] = k;
                            let mut b = alpha.clone();
                            b[j] = l;
                            let mut c = a.clone();
                            c[j] = l;
                            out.push(((i + 1, j + 1), [alpha.clone(), a, b, c]));
                        }
                    }
                }
            }
        }
        out
    }

    /// 3-faces of `G(J)` that are cubes: three colors and the 8 corners
    /// indexed by the bit pattern of which coordinates moved.
    pub fn grid_cubes(&self) -> Vec<([usize; 3], Vec<Vec<usize>>)> {
        let mut out = Vec::new();
        let m = self.m();
        for alpha in self.grid_vertices() {
            for a in 0..m {
                for b in a + 1..m {
                    for c in b + 1..m {
                        for ka in alpha[a] + 1..=self.j[a] {
                            for kb in alpha[b] + 1..=self.j[b] {
                                for kc in alpha[c] + 1..=self.j[c] {
                                    let corners = (0..8)
                                        .map(|bits: usize| {
                                            let mut v = alpha.clone();
                                            if bits & 1 != 0 {
                                                v[a] = ka;
                                            }
                                            if bits & 2 != 0 {
                                                v[b] = kb;
                                            }
                                            if bits & 4 != 0 {
                                                v[c] = kc;
                                            }
                                            v
                                        })
                                        .collect();
                                    out.push(([a + 1, b + 1, c + 1], corners));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

/// The simplicial complex `P_m(J)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeComplex {
    pub signature: WedgeSignature,
    pub vertices: Vec<Label>,
    /// sorted facets, each a sorted label list
    pub facets: Vec<Vec<Label>>,
}

impl WedgeComplex {
    /// Facets: for each polygon edge `{i, i+1}`, all copies of `i` and `i+1`
    /// plus, for every other vertex, all copies but one.
    pub fn build(signature: &WedgeSignature) -> Self {
        let m = signature.m();
        let mut facets = Vec::new();
        for i in 0..m {
            let next = (i + 1) % m;
            let others: Vec<usize> = (0..m).filter(|&k| k != i && k != next).collect();
            let mut partial: Vec<Vec<Label>> = vec![vec![]];
            for &k in &others {
                let jk = signature.j[k];
                partial = partial
                    .into_iter()
                    .flat_map(|f| {
                        (1..=jk).map(move |omit| {
                            let mut f = f.clone();
                            f.extend((1..=jk).filter(|&c| c != omit).map(|c| Label::new(k + 1, c)));
                            f
                        })
                    })
                    .collect();
            }
            for mut f in partial {
                f.extend((1..=signature.j[i]).map(|c| Label::new(i + 1, c)));
                f.extend((1..=signature.j[next]).map(|c| Label::new(next + 1, c)));
                f.sort();
                facets.push(f);
            }
        }
        facets.sort();
        facets.dedup();
        Self {
            signature: signature.clone(),
            vertices: signature.labels(),
            facets,
        }
    }

    pub fn polygon(m: usize) -> Result<Self, PuzzleError> {
        Ok(Self::build(&WedgeSignature::polygon(m)?))
    }

    /// Pairs of facets sharing all but one vertex, as `(a, b)` facet indices.
    pub fn adjacent_facets(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.facets.len() {
            for b in a + 1..self.facets.len() {
                let shared = self.facets[a]
                    .iter()
                    .filter(|l| self.facets[b].binary_search(l).is_ok())
                    .count();
                if shared + 1 == self.facets[a].len() {
                    out.push((a, b));
                }
            }
        }
        out
    }
}
