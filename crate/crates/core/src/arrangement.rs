//! Combinatorics of an arrangement of integer linear forms: bases, the
//! no-broken-circuit diagonal basis, walls, and alcove data of points `t`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratlinalg::{
    coordinates_in_basis, coset_representatives, det, nullspace, primitive_integer_vector,
    rational_rank, CosetReps, IntMatrix, Rational,
};
use crate::residues::duality_matrix;

/// A non-zero indivisible integer covector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct LinearForm {
    coords: Vec<i64>,
}

impl LinearForm {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        let g = coords.iter().fold(0i64, |acc, &x| acc.gcd(&x));
        if g == 0 {
            return Err(Error::InvalidArrangement("zero form".into()));
        }
        if g != 1 {
            return Err(Error::InvalidArrangement(format!(
                "form {coords:?} is divisible by {g}"
            )));
        }
        Ok(LinearForm { coords })
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        self.coords
            .iter()
            .map(|&x| Rational::from_integer(x.into()))
            .collect()
    }

    /// `<self, v>` for a rational vector.
    pub fn pair(&self, v: &[Rational]) -> Rational {
        self.coords
            .iter()
            .zip(v)
            .map(|(&a, b)| b * Rational::from_integer(a.into()))
            .sum()
    }
}

impl TryFrom<Vec<i64>> for LinearForm {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        LinearForm::new(v)
    }
}

impl From<LinearForm> for Vec<i64> {
    fn from(f: LinearForm) -> Self {
        f.coords
    }
}

/// A finite set of pairwise non-proportional forms spanning `Q^r`. The list
/// order is the total order used for the diagonal basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ArrangementJson", into = "ArrangementJson")]
pub struct Arrangement {
    rank: usize,
    forms: Vec<LinearForm>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrangementJson {
    rank: usize,
    forms: Vec<Vec<i64>>,
}

impl TryFrom<ArrangementJson> for Arrangement {
    type Error = Error;
    fn try_from(j: ArrangementJson) -> Result<Self> {
        Arrangement::from_coords(j.rank, &j.forms)
    }
}

impl From<Arrangement> for ArrangementJson {
    fn from(a: Arrangement) -> Self {
        ArrangementJson {
            rank: a.rank,
            forms: a.forms.into_iter().map(Into::into).collect(),
        }
    }
}

impl Arrangement {
    pub fn new(rank: usize, forms: Vec<LinearForm>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidArrangement("rank must be positive".into()));
        }
        for f in &forms {
            if f.coords.len() != rank {
                return Err(Error::InvalidArrangement(format!(
                    "form {:?} has length {}, expected {rank}",
                    f.coords,
                    f.coords.len()
                )));
            }
        }
        for (i, a) in forms.iter().enumerate() {
            for b in &forms[..i] {
                if proportional(a.coords(), b.coords()) {
                    return Err(Error::InvalidArrangement(format!(
                        "forms {:?} and {:?} are proportional",
                        b.coords, a.coords
                    )));
                }
            }
        }
        let rows: Vec<Vec<Rational>> = forms.iter().map(LinearForm::to_rational).collect();
        if rational_rank(&rows) != rank {
            return Err(Error::InvalidArrangement("forms do not span".into()));
        }
        Ok(Arrangement { rank, forms })
    }

    pub fn from_coords(rank: usize, forms: &[Vec<i64>]) -> Result<Self> {
        let forms = forms
            .iter()
            .map(|f| LinearForm::new(f.clone()))
            .collect::<Result<Vec<_>>>()?;
        Arrangement::new(rank, forms)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn forms(&self) -> &[LinearForm] {
        &self.forms
    }

    pub fn form(&self, i: usize) -> &LinearForm {
        &self.forms[i]
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// Integer matrix whose rows are the selected forms.
    pub fn matrix(&self, indices: &[usize]) -> IntMatrix {
        let rows: Vec<Vec<i64>> = indices.iter().map(|&i| self.forms[i].coords.clone()).collect();
        IntMatrix::from_rows(&rows).expect("forms share one length")
    }

    pub fn rational_rows(&self, indices: &[usize]) -> Vec<Vec<Rational>> {
        indices.iter().map(|&i| self.forms[i].to_rational()).collect()
    }

    pub fn rank_of(&self, indices: &[usize]) -> usize {
        if indices.is_empty() {
            return 0;
        }
        rational_rank(&self.rational_rows(indices))
    }

    pub fn is_independent(&self, indices: &[usize]) -> bool {
        self.rank_of(indices) == indices.len()
    }
}

fn proportional(a: &[i64], b: &[i64]) -> bool {
    (0..a.len()).all(|i| (0..a.len()).all(|j| a[i] as i128 * b[j] as i128 == a[j] as i128 * b[i] as i128))
}

/// Sequence of `r` positions into the arrangement; order is significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderedBasis {
    pub indices: Vec<usize>,
}

impl OrderedBasis {
    pub fn new(arr: &Arrangement, indices: Vec<usize>) -> Result<Self> {
        if indices.len() != arr.rank() || indices.iter().any(|&i| i >= arr.len()) {
            return Err(Error::InvalidInput(format!(
                "{indices:?} is not an r-subset of the arrangement"
            )));
        }
        if !arr.is_independent(&indices) {
            return Err(Error::Singular);
        }
        Ok(OrderedBasis { indices })
    }

    /// Underlying unordered basis, sorted.
    pub fn support(&self) -> Vec<usize> {
        let mut s = self.indices.clone();
        s.sort_unstable();
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagonalBasis {
    pub members: Vec<OrderedBasis>,
}

impl DiagonalBasis {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub(crate) fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All bases of the arrangement, as sorted index sets in lexicographic order.
pub fn enumerate_bases(arr: &Arrangement) -> Vec<Vec<usize>> {
    subsets(arr.len(), arr.rank())
        .into_iter()
        .filter(|s| !det(&arr.matrix(s)).expect("square").is_zero())
        .collect()
}

/// True if the sorted basis contains no broken circuit: no form `a` with
/// index smaller than every element of some `T ⊆ basis` lies in `span(T)`.
pub fn is_nbc(arr: &Arrangement, basis: &[usize]) -> bool {
    let r = basis.len();
    for mask in 1u32..(1 << r) {
        let t: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).map(|i| basis[i]).collect();
        let min = *t.iter().min().unwrap();
        let rank_t = arr.rank_of(&t);
        for a in 0..min {
            let mut ta = t.clone();
            ta.push(a);
            if arr.rank_of(&ta) == rank_t {
                return false;
            }
        }
    }
    true
}

/// No-broken-circuit bases for the list order, each ordered increasingly.
/// The iterated residues of every pair are checked to be dual before the
/// result is returned.
pub fn diagonal_basis(arr: &Arrangement) -> Result<DiagonalBasis> {
    let members: Vec<OrderedBasis> = enumerate_bases(arr)
        .into_iter()
        .filter(|b| is_nbc(arr, b))
        .map(|indices| OrderedBasis { indices })
        .collect();
    let db = DiagonalBasis { members };
    let m = duality_matrix(arr, &db)?;
    for (i, row) in m.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            let expected = if i == j { Rational::one() } else { Rational::zero() };
            if *v != expected {
                return Err(Error::DualityFailure {
                    tau: db.members[i].indices.clone(),
                    sigma: db.members[j].indices.clone(),
                    value: v.clone(),
                });
            }
        }
    }
    Ok(db)
}

/// Primitive integer normals (in `N`) of the walls: hyperplanes of `V*`
/// spanned by `r - 1` independent forms. Sign-normalized and deduplicated.
pub fn wall_normals(arr: &Arrangement) -> Vec<Vec<BigInt>> {
    let r = arr.rank();
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    if r == 1 {
        return vec![vec![BigInt::one()]];
    }
    for s in subsets(arr.len(), r - 1) {
        if arr.rank_of(&s) != r - 1 {
            continue;
        }
        let ns = nullspace(&arr.rational_rows(&s), r);
        let v = primitive_integer_vector(&ns[0]);
        if !out.contains(&v) {
            out.push(v);
        }
    }
    out.sort();
    out
}

fn pair_int(v: &[BigInt], t: &[Rational]) -> Rational {
    v.iter()
        .zip(t)
        .map(|(a, b)| b * Rational::from_integer(a.clone()))
        .sum()
}

/// The first wall normal `v` with `<t, v>` integral, if any.
pub fn violated_wall(t: &[Rational], arr: &Arrangement) -> Option<(Vec<BigInt>, Rational)> {
    wall_normals(arr).into_iter().find_map(|v| {
        let x = pair_int(&v, t);
        x.is_integer().then_some((v, x))
    })
}

/// `t` avoids every wall and every lattice translate of one.
pub fn is_alcove_regular(t: &[Rational], arr: &Arrangement) -> bool {
    t.len() == arr.rank() && violated_wall(t, arr).is_none()
}

/// An alcove-regular point of `V*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlcovePoint {
    coords: Vec<Rational>,
}

impl AlcovePoint {
    pub fn new(coords: Vec<Rational>, arr: &Arrangement) -> Result<Self> {
        if coords.len() != arr.rank() {
            return Err(Error::RankMismatch {
                expected: arr.rank(),
                found: coords.len(),
            });
        }
        if let Some((normal, value)) = violated_wall(&coords, arr) {
            return Err(Error::OnWall { normal, value });
        }
        Ok(AlcovePoint { coords })
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    /// Checks that the segment from 0 to this point meets no wall translate,
    /// i.e. the alcove has the origin in its closure.
    pub fn check_adjacent_to_origin(&self, arr: &Arrangement) -> Result<()> {
        for v in wall_normals(arr) {
            let x = pair_int(&v, &self.coords);
            if x.abs() >= Rational::one() {
                return Err(Error::NotAdjacentToOrigin { normal: v, value: x });
            }
        }
        Ok(())
    }
}

/// `[t]_sigma` and `R(t, sigma) = (t - Q_sigma) ∩ M`.
pub fn floor_and_box_reps(
    t: &[Rational],
    arr: &Arrangement,
    sigma: &[usize],
) -> Result<(Vec<BigInt>, CosetReps)> {
    if t.len() != arr.rank() {
        return Err(Error::RankMismatch {
            expected: arr.rank(),
            found: t.len(),
        });
    }
    let rows = arr.rational_rows(sigma);
    let coords = coordinates_in_basis(&rows, t).ok_or(Error::Singular)?;
    if let Some(j) = coords.iter().position(Rational::is_integer) {
        let normal = sigma_dual_normal(arr, sigma, j);
        let value = pair_int(&normal, t);
        return Err(Error::OnWall { normal, value });
    }
    let floor = floor_combination(arr, sigma, &coords);
    let cosets = coset_representatives(&arr.matrix(sigma))?;
    let mut reps = Vec::with_capacity(cosets.representatives.len());
    for c in &cosets.representatives {
        // u = c + [t - c]_sigma
        let shifted: Vec<Rational> = t
            .iter()
            .zip(c)
            .map(|(x, ci)| x - Rational::from_integer(ci.clone()))
            .collect();
        let sc = coordinates_in_basis(&rows, &shifted).ok_or(Error::Singular)?;
        let fl = floor_combination(arr, sigma, &sc);
        reps.push(c.iter().zip(fl).map(|(a, b)| a + b).collect::<Vec<BigInt>>());
    }
    reps.sort();
    Ok((
        floor,
        CosetReps {
            representatives: reps,
            index: cosets.index,
        },
    ))
}

fn floor_combination(arr: &Arrangement, sigma: &[usize], coords: &[Rational]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); arr.rank()];
    for (c, &i) in coords.iter().zip(sigma) {
        let f = c.floor().to_integer();
        for (o, &a) in out.iter_mut().zip(arr.form(i).coords()) {
            *o += &f * BigInt::from(a);
        }
    }
    out
}

/// Primitive normal of the wall spanned by `sigma` minus its `j`-th form.
fn sigma_dual_normal(arr: &Arrangement, sigma: &[usize], j: usize) -> Vec<BigInt> {
    let r = arr.rank();
    if r == 1 {
        return vec![BigInt::one()];
    }
    let others: Vec<usize> = sigma.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, &i)| i).collect();
    let ns = nullspace(&arr.rational_rows(&others), r);
    primitive_integer_vector(&ns[0])
}
