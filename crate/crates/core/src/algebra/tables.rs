//! Structure constants written out from the index formulas of each grading.
//!
//! Every source only defines the brackets for one ordering of each pair of
//! graded pieces (plus g0 x g0); the assembler in `build_table` fills the
//! reversed pairs by antisymmetry.

use std::collections::BTreeMap;

use num_rational::Rational64;
use num_traits::Zero;

use super::kind::StructureKind;

pub(crate) type Q = Rational64;
pub(crate) type SVec = Vec<(usize, Q)>;

fn q(n: i64) -> Q {
    Q::from_integer(n)
}

fn delta(a: usize, b: usize) -> i64 {
    (a == b) as i64
}

#[derive(Default)]
struct Acc(BTreeMap<usize, Q>);

impl Acc {
    fn add(&mut self, i: usize, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.0.entry(i).or_insert_with(Q::zero);
        *e += c;
    }

    fn finish(self) -> SVec {
        self.0.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Piece {
    Minus,
    Zero,
    Plus,
}

pub(crate) struct Table {
    pub n: usize,
    pub n0: usize,
    pub labels: [Vec<String>; 3],
    /// `brackets[u * N + v]`, sparse in global coordinates.
    pub brackets: Vec<SVec>,
    /// `pairing[a][x]` = <f_a, e_x> for f_a in g1 and e_x in g-1.
    pub pairing: Vec<Vec<Q>>,
}

trait Source {
    fn n(&self) -> usize;
    fn n0(&self) -> usize;
    fn labels(&self) -> [Vec<String>; 3];
    /// Bracket of local basis elements, `None` if this ordering is not one of
    /// the defining formulas. Results are in global coordinates.
    fn bracket(&self, a: (Piece, usize), b: (Piece, usize)) -> Option<SVec>;
    fn pairing(&self) -> Vec<Vec<Q>>;

    fn g(&self, piece: Piece, i: usize) -> usize {
        match piece {
            Piece::Minus => i,
            Piece::Zero => self.n() + i,
            Piece::Plus => self.n() + self.n0() + i,
        }
    }
}

fn build_table<S: Source>(s: &S) -> Table {
    let (n, n0) = (s.n(), s.n0());
    let big_n = 2 * n + n0;
    let local = |u: usize| {
        if u < n {
            (Piece::Minus, u)
        } else if u < n + n0 {
            (Piece::Zero, u - n)
        } else {
            (Piece::Plus, u - n - n0)
        }
    };
    let mut brackets = vec![Vec::new(); big_n * big_n];
    for u in 0..big_n {
        for v in 0..big_n {
            let (a, b) = (local(u), local(v));
            let abelian = a.0 == b.0 && a.0 != Piece::Zero;
            if abelian {
                continue;
            }
            let r = match s.bracket(a, b) {
                Some(r) => r,
                None => s
                    .bracket(b, a)
                    .unwrap_or_else(|| panic!("no formula for {a:?} x {b:?}"))
                    .into_iter()
                    .map(|(i, c)| (i, -c))
                    .collect(),
            };
            brackets[u * big_n + v] = r;
        }
    }
    Table {
        n,
        n0,
        labels: s.labels(),
        brackets,
        pairing: s.pairing(),
    }
}

pub(crate) fn table_for(kind: StructureKind) -> Table {
    match kind {
        StructureKind::Grassmannian { p, q } => build_table(&Grassmannian::new(p, q, false)),
        StructureKind::Projective { q } => build_table(&Grassmannian::new(1, q, true)),
        StructureKind::Lagrangian { m } => build_table(&PairAlgebra::new(m, true)),
        StructureKind::Spinorial { m } => build_table(&PairAlgebra::new(m, false)),
        StructureKind::Conformal { m } => build_table(&Conformal { m }),
    }
}

// ---------------------------------------------------------------------------
// sl(p+q): g-1 = Mat_{q,p} spanned by e^a_i, g1 = Mat_{p,q} spanned by e^i_a,
// g0 = s(gl(p) + gl(q)). Here e^x_y denotes the matrix with a 1 in row y,
// column x. The g0 basis is the off-diagonal e^b_a of each block followed by
// H_r = E_rr - E_{r+1,r+1} over the full (p+q)-diagonal.

pub(crate) struct Grassmannian {
    p: usize,
    q: usize,
    projective: bool,
    /// off-diagonal positions (row, col) of the full matrix, in basis order
    off: Vec<(usize, usize)>,
    off_index: BTreeMap<(usize, usize), usize>,
}

/// A gl(p+q) block-diagonal element as sparse (row, col) entries.
type Gl = Vec<((usize, usize), Q)>;

impl Grassmannian {
    pub(crate) fn new(p: usize, q: usize, projective: bool) -> Self {
        let s = p + q;
        let mut off = Vec::new();
        for r in 0..s {
            for c in 0..s {
                if r != c && ((r < p) == (c < p)) {
                    off.push((r, c));
                }
            }
        }
        let off_index = off.iter().enumerate().map(|(i, &rc)| (rc, i)).collect();
        Grassmannian {
            p,
            q,
            projective,
            off,
            off_index,
        }
    }

    fn m1(&self, a: usize, i: usize) -> usize {
        a * self.q + i
    }

    fn p1(&self, a: usize, i: usize) -> usize {
        self.g(Piece::Plus, a * self.q + i)
    }

    fn split(&self, x: usize) -> (usize, usize) {
        (x / self.q, x % self.q)
    }

    fn g0_as_gl(&self, c: usize) -> Gl {
        if c < self.off.len() {
            vec![(self.off[c], q(1))]
        } else {
            let r = c - self.off.len();
            vec![((r, r), q(1)), ((r + 1, r + 1), q(-1))]
        }
    }

    /// Expresses a traceless block-diagonal matrix in the g0 basis.
    fn gl_to_basis(&self, gl: &Gl, acc: &mut Acc) {
        let s = self.p + self.q;
        let mut diag = vec![Q::zero(); s];
        for &((r, c), v) in gl {
            if r == c {
                diag[r] += v;
            } else {
                let i = self.off_index[&(r, c)];
                acc.add(self.g(Piece::Zero, i), v);
            }
        }
        let mut h = Q::zero();
        for (r, d) in diag.iter().enumerate().take(s - 1) {
            h += *d;
            acc.add(self.g(Piece::Zero, self.off.len() + r), h);
        }
        debug_assert!((h + diag[s - 1]).is_zero(), "trace must vanish");
    }

    /// gl(p) generator e^x_y is E(y, x); gl(q) generator e^j_i is E(p+i, p+j).
    fn glp(&self, x: usize, y: usize) -> (usize, usize) {
        (y, x)
    }

    fn glq(&self, j: usize, i: usize) -> (usize, usize) {
        (self.p + i, self.p + j)
    }
}

impl Source for Grassmannian {
    fn n(&self) -> usize {
        self.p * self.q
    }

    fn n0(&self) -> usize {
        let s = self.p + self.q;
        self.off.len() + s - 1
    }

    fn labels(&self) -> [Vec<String>; 3] {
        let (p, q) = (self.p, self.q);
        let mut m1 = Vec::new();
        let mut p1 = Vec::new();
        for a in 0..p {
            for i in 0..q {
                if self.projective {
                    m1.push(format!("e_{}", i + 1));
                    p1.push(format!("e^{}", i + 1));
                } else {
                    m1.push(format!("e^{}_{}", a + 1, i + 1));
                    p1.push(format!("e_{}^{}", a + 1, i + 1));
                }
            }
        }
        let mut z: Vec<String> = self
            .off
            .iter()
            .map(|&(r, c)| {
                if r < p {
                    format!("A^{}_{}", c + 1, r + 1)
                } else {
                    format!("D^{}_{}", c - p + 1, r - p + 1)
                }
            })
            .collect();
        for r in 0..p + q - 1 {
            z.push(format!("H_{}", r + 1));
        }
        [m1, z, p1]
    }

    fn bracket(&self, a: (Piece, usize), b: (Piece, usize)) -> Option<SVec> {
        let p = self.p;
        let mut acc = Acc::default();
        match (a.0, b.0) {
            // [e^a_i, e^j_b] = d^a_b e^j_i - d^j_i e^a_b
            (Piece::Minus, Piece::Plus) => {
                let (aa, i) = self.split(a.1);
                let (bb, j) = self.split(b.1);
                let gl: Gl = vec![
                    (self.glq(j, i), q(delta(aa, bb))),
                    (self.glp(aa, bb), q(-delta(j, i))),
                ];
                self.gl_to_basis(&gl, &mut acc);
            }
            // [e^k_a, e^b_c] = -d^b_a e^k_c ; [e^k_a, e^j_l] = d^k_l e^j_a
            (Piece::Plus, Piece::Zero) => {
                let (aa, k) = self.split(a.1);
                for ((r, c), v) in self.g0_as_gl(b.1) {
                    if r < p {
                        let (bb, cc) = (c, r);
                        if bb == aa {
                            acc.add(self.p1(cc, k), -v);
                        }
                    } else {
                        let (j, l) = (c - p, r - p);
                        if k == l {
                            acc.add(self.p1(aa, j), v);
                        }
                    }
                }
            }
            // [e^a_i, e^c_b] = d^a_b e^c_i ; [e^a_i, e^k_j] = -d^k_i e^a_j
            (Piece::Minus, Piece::Zero) => {
                let (aa, i) = self.split(a.1);
                for ((r, c), v) in self.g0_as_gl(b.1) {
                    if r < p {
                        let (cc, bb) = (c, r);
                        if aa == bb {
                            acc.add(self.m1(cc, i), v);
                        }
                    } else {
                        let (k, j) = (c - p, r - p);
                        if k == i {
                            acc.add(self.m1(aa, j), -v);
                        }
                    }
                }
            }
            // [E(a,b), E(c,d)] = d_bc E(a,d) - d_da E(c,b), within each block
            (Piece::Zero, Piece::Zero) => {
                let mut gl: Gl = Vec::new();
                for ((r1, c1), v1) in self.g0_as_gl(a.1) {
                    for ((r2, c2), v2) in self.g0_as_gl(b.1) {
                        if c1 == r2 {
                            gl.push(((r1, c2), v1 * v2));
                        }
                        if c2 == r1 {
                            gl.push(((r2, c1), -v1 * v2));
                        }
                    }
                }
                self.gl_to_basis(&gl, &mut acc);
            }
            _ => return None,
        }
        Some(acc.finish())
    }

    fn pairing(&self) -> Vec<Vec<Q>> {
        let n = self.n();
        (0..n)
            .map(|a| (0..n).map(|x| q(delta(a, x))).collect())
            .collect()
    }
}

// ---------------------------------------------------------------------------
// sp(2m) (symmetric pairs) and so(m,m) (antisymmetric pairs):
// g-1 = S^2 R^m resp. L^2 R^m with basis e_k.e_l, g1 the dual pairs e^s.e^t,
// g0 = gl(m) with basis e^p_w.

pub(crate) struct PairAlgebra {
    m: usize,
    symmetric: bool,
    pairs: Vec<(usize, usize)>,
    index: BTreeMap<(usize, usize), usize>,
}

impl PairAlgebra {
    pub(crate) fn new(m: usize, symmetric: bool) -> Self {
        let mut pairs = Vec::new();
        for k in 0..m {
            let start = if symmetric { k } else { k + 1 };
            for l in start..m {
                pairs.push((k, l));
            }
        }
        let index = pairs.iter().enumerate().map(|(i, &kl)| (kl, i)).collect();
        PairAlgebra {
            m,
            symmetric,
            pairs,
            index,
        }
    }

    /// Coordinate of the (possibly unordered) pair e_k.e_l: index and sign.
    fn pair(&self, k: usize, l: usize) -> Option<(usize, i64)> {
        if k <= l {
            self.index.get(&(k, l)).map(|&i| (i, 1))
        } else {
            let sign = if self.symmetric { 1 } else { -1 };
            self.index.get(&(l, k)).map(|&i| (i, sign))
        }
    }

    fn add_pair(&self, acc: &mut Acc, piece: Piece, k: usize, l: usize, c: Q) {
        if let Some((i, s)) = self.pair(k, l) {
            acc.add(self.g(piece, i), c * q(s));
        }
    }

    fn gl(&self, p: usize, w: usize) -> usize {
        self.g(Piece::Zero, p * self.m + w)
    }
}

impl Source for PairAlgebra {
    fn n(&self) -> usize {
        self.pairs.len()
    }

    fn n0(&self) -> usize {
        self.m * self.m
    }

    fn labels(&self) -> [Vec<String>; 3] {
        let op = if self.symmetric { "⊙" } else { "∧" };
        let m1 = self
            .pairs
            .iter()
            .map(|&(k, l)| format!("e_{}{op}e_{}", k + 1, l + 1))
            .collect();
        let p1 = self
            .pairs
            .iter()
            .map(|&(k, l)| format!("e^{}{op}e^{}", k + 1, l + 1))
            .collect();
        let mut z = Vec::new();
        for p in 0..self.m {
            for w in 0..self.m {
                z.push(format!("e^{}_{}", p + 1, w + 1));
            }
        }
        [m1, z, p1]
    }

    fn bracket(&self, a: (Piece, usize), b: (Piece, usize)) -> Option<SVec> {
        let m = self.m;
        let mut acc = Acc::default();
        let quarter = Q::new(1, 4);
        match (a.0, b.0) {
            (Piece::Plus, Piece::Minus) => {
                let (s, t) = self.pairs[a.1];
                let (k, l) = self.pairs[b.1];
                if self.symmetric {
                    // -1/4 (d^s_k e^t_l + d^s_l e^t_k + d^t_k e^s_l + d^t_l e^s_k)
                    for (d, x, y) in [(delta(s, k), t, l), (delta(s, l), t, k)]
                        .into_iter()
                        .chain([(delta(t, k), s, l), (delta(t, l), s, k)])
                    {
                        acc.add(self.gl(x, y), -quarter * q(d));
                    }
                } else {
                    // 1/4 (-d^s_l e^t_k + d^t_l e^s_k + d^s_k e^t_l - d^t_k e^s_l)
                    for (d, x, y) in [
                        (-delta(s, l), t, k),
                        (delta(t, l), s, k),
                        (delta(s, k), t, l),
                        (-delta(t, k), s, l),
                    ] {
                        acc.add(self.gl(x, y), quarter * q(d));
                    }
                }
            }
            (Piece::Plus, Piece::Zero) => {
                let (s, t) = self.pairs[a.1];
                let (p, w) = (b.1 / m, b.1 % m);
                if self.symmetric {
                    // d^t_w e^p.e^s + d^s_w e^p.e^t
                    self.add_pair(&mut acc, Piece::Plus, p, s, q(delta(t, w)));
                    self.add_pair(&mut acc, Piece::Plus, p, t, q(delta(s, w)));
                } else {
                    // d^t_w e^s^e^p - d^s_w e^t^e^p
                    self.add_pair(&mut acc, Piece::Plus, s, p, q(delta(t, w)));
                    self.add_pair(&mut acc, Piece::Plus, t, p, q(-delta(s, w)));
                }
            }
            (Piece::Zero, Piece::Minus) => {
                let (p, w) = (a.1 / m, a.1 % m);
                let (k, l) = self.pairs[b.1];
                // d^p_k e_w.e_l + d^p_l e_w.e_k   (symmetric)
                // d^p_k e_w^e_l - d^p_l e_w^e_k   (antisymmetric)
                let sign = if self.symmetric { 1 } else { -1 };
                self.add_pair(&mut acc, Piece::Minus, w, l, q(delta(p, k)));
                self.add_pair(&mut acc, Piece::Minus, w, k, q(sign * delta(p, l)));
            }
            (Piece::Zero, Piece::Zero) => {
                // [e^p_w, e^r_v] = d^p_v e^r_w - d^r_w e^p_v
                let (p, w) = (a.1 / m, a.1 % m);
                let (r, v) = (b.1 / m, b.1 % m);
                acc.add(self.gl(r, w), q(delta(p, v)));
                acc.add(self.gl(p, v), q(-delta(r, w)));
            }
            _ => return None,
        }
        Some(acc.finish())
    }

    fn pairing(&self) -> Vec<Vec<Q>> {
        // trace form of the defining representation
        let n = self.n();
        (0..n)
            .map(|a| {
                (0..n)
                    .map(|x| {
                        if a != x {
                            Q::zero()
                        } else if !self.symmetric {
                            Q::new(-1, 2)
                        } else if self.pairs[a].0 == self.pairs[a].1 {
                            q(1)
                        } else {
                            Q::new(1, 2)
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// so(m+1,1): g-1 = R^m with basis e_i, g0 = co(m) with the grading element E
// and the rotations A_ij (i < j), g1 = R^m* with basis e^i dual to e_i.

struct Conformal {
    m: usize,
}

impl Conformal {
    /// Coordinate of A_ij for any i != j, with sign (A_ji = -A_ij).
    fn rot(&self, i: usize, j: usize) -> Option<(usize, i64)> {
        let m = self.m;
        let idx = |a: usize, b: usize| {
            // position of (a, b), a < b, in lexicographic order
            a * (2 * m - a - 1) / 2 + (b - a - 1)
        };
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Some((1 + idx(i, j), 1)),
            std::cmp::Ordering::Greater => Some((1 + idx(j, i), -1)),
            std::cmp::Ordering::Equal => None,
        }
    }

    fn rot_pairs(&self) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for i in 0..self.m {
            for j in i + 1..self.m {
                v.push((i, j));
            }
        }
        v
    }

    fn add_rot(&self, acc: &mut Acc, i: usize, j: usize, c: Q) {
        if let Some((k, s)) = self.rot(i, j) {
            acc.add(self.g(Piece::Zero, k), c * q(s));
        }
    }
}

impl Source for Conformal {
    fn n(&self) -> usize {
        self.m
    }

    fn n0(&self) -> usize {
        1 + self.m * (self.m - 1) / 2
    }

    fn labels(&self) -> [Vec<String>; 3] {
        let m1 = (0..self.m).map(|i| format!("e_{}", i + 1)).collect();
        let p1 = (0..self.m).map(|i| format!("e^{}", i + 1)).collect();
        let mut z = vec!["E".to_string()];
        for (i, j) in self.rot_pairs() {
            z.push(format!("A_{}{}", i + 1, j + 1));
        }
        [m1, z, p1]
    }

    fn bracket(&self, a: (Piece, usize), b: (Piece, usize)) -> Option<SVec> {
        let rots = self.rot_pairs();
        let mut acc = Acc::default();
        match (a.0, b.0) {
            // [e_i, e^j] = d_ij E - A_ij
            (Piece::Minus, Piece::Plus) => {
                let (i, j) = (a.1, b.1);
                acc.add(self.g(Piece::Zero, 0), q(delta(i, j)));
                self.add_rot(&mut acc, i, j, q(-1));
            }
            // [E, e_k] = -e_k ; [A_ij, e_k] = d_jk e_i - d_ik e_j
            (Piece::Zero, Piece::Minus) | (Piece::Zero, Piece::Plus) => {
                let k = b.1;
                if a.1 == 0 {
                    let s = if b.0 == Piece::Minus { -1 } else { 1 };
                    acc.add(self.g(b.0, k), q(s));
                } else {
                    let (i, j) = rots[a.1 - 1];
                    acc.add(self.g(b.0, i), q(delta(j, k)));
                    acc.add(self.g(b.0, j), q(-delta(i, k)));
                }
            }
            // [A_ij, A_kl] = d_jk A_il - d_ik A_jl - d_jl A_ik + d_il A_jk ; E central
            (Piece::Zero, Piece::Zero) => {
                if a.1 != 0 && b.1 != 0 {
                    let (i, j) = rots[a.1 - 1];
                    let (k, l) = rots[b.1 - 1];
                    self.add_rot(&mut acc, i, l, q(delta(j, k)));
                    self.add_rot(&mut acc, j, l, q(-delta(i, k)));
                    self.add_rot(&mut acc, i, k, q(-delta(j, l)));
                    self.add_rot(&mut acc, j, k, q(delta(i, l)));
                }
            }
            _ => return None,
        }
        Some(acc.finish())
    }

    fn pairing(&self) -> Vec<Vec<Q>> {
        (0..self.m)
            .map(|a| (0..self.m).map(|x| q(delta(a, x))).collect())
            .collect()
    }
}
