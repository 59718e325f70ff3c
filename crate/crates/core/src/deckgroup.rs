//! Enumeration of the Bolza surface group and dyadic counts of deck
//! transformations whose translates of the fundamental domain meet a tube.
//!
//! The fundamental domain `D` is the regular hyperbolic octagon with interior
//! angles `π/4` centered at `i`. Its opposite sides are paired by the four
//! translations `g_j = K(jπ/4) · diag(e^{ℓ/2}, e^{-ℓ/2}) · K(-jπ/4)` where
//! `K(φ)` rotates about `i` by `φ` and `ℓ = 2 arccosh(1 + √2)`, so
//! `tr g_j = 2(1 + √2)`:
//!
//! ```text
//! g_0 = [ 1+√2              0      ]     g_j = K(jπ/4) g_0 K(jπ/4)⁻¹
//!       [ 0                 √2-1   ]
//! ```
//!
//! Completeness is certified by a tile-path argument: the segment from `i` to
//! `α(i)` crosses a chain of translates `β_0 D, β_1 D, ..., α D` with
//! consecutive elements differing by one generator, and each `β_j(i)` lies
//! within the circumradius `r_c` of the segment. A breadth-first search that
//! keeps only elements within `cap` and whose deepest shell lies beyond
//! `ρ + r_c` therefore contains every element of displacement `≤ ρ`.
//! Tubes about geodesics are convex, so when `α D` meets `T_R(γ̃)` (with `i`
//! on `γ̃`) the whole path stays within `R + 2 r_c` of the axis, and pruning
//! orbit points beyond that distance loses none of those elements.

use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, SQRT_2};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::manifolds::hyperbolic::{self, Mobius};

/// Largest word length accepted by [`enumerate_group`].
pub const MAX_WORD_LENGTH: usize = 16;

/// Default deduplication tolerance (hyperbolic distance between orbit points).
pub const DEDUP_TOLERANCE: f64 = 1e-7;

const LETTERS: [char; 8] = ['a', 'b', 'c', 'd', 'A', 'B', 'C', 'D'];

/// A determinant-one Möbius transformation together with the word that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct MobiusElement {
    pub matrix: Mobius,
    /// Generator indices; `j` and `j + 4` are mutually inverse.
    pub word: Vec<u8>,
}

impl MobiusElement {
    pub fn new(matrix: Mobius, word: Vec<u8>) -> Result<Self> {
        if (matrix.det() - 1.0).abs() > 1e-10 {
            return Err(invalid(format!("determinant {} is not 1", matrix.det())));
        }
        Ok(Self { matrix: matrix.sign_normalized(), word })
    }

    pub fn identity() -> Self {
        Self { matrix: Mobius::IDENTITY, word: Vec::new() }
    }

    pub fn displacement(&self) -> f64 {
        displacement(&self.matrix)
    }

    pub fn word_string(&self) -> String {
        if self.word.is_empty() {
            return "e".to_owned();
        }
        self.word.iter().map(|&g| LETTERS[g as usize % 8]).collect()
    }

    pub fn inverse(&self) -> Self {
        let word = self.word.iter().rev().map(|&g| (g + 4) % 8).collect();
        Self { matrix: self.matrix.inverse().sign_normalized(), word }
    }

    pub fn compose(&self, other: &Self) -> Self {
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Self { matrix: (self.matrix * other.matrix).sign_normalized(), word }
    }
}

/// `d(i, α(i))`; equivalently `cosh d = (a² + b² + c² + d²)/2`.
pub fn displacement(alpha: &Mobius) -> f64 {
    alpha.displacement()
}

/// Translation length of the Bolza generators, `2 arccosh(1 + √2)`.
pub fn bolza_translation_length() -> f64 {
    2.0 * (1.0 + SQRT_2).acosh()
}

/// Shortest closed geodesic of the Bolza surface.
pub fn bolza_systole() -> f64 {
    bolza_translation_length()
}

/// `[g_0, g_1, g_2, g_3, g_0⁻¹, g_1⁻¹, g_2⁻¹, g_3⁻¹]`.
pub fn bolza_generators() -> Vec<MobiusElement> {
    let t = Mobius::axial_translation(bolza_translation_length());
    let forward: Vec<Mobius> = (0..4)
        .map(|j| {
            let k = Mobius::rotation_about_i(j as f64 * FRAC_PI_4);
            k * t * k.inverse()
        })
        .collect();
    forward
        .iter()
        .copied()
        .chain(forward.iter().map(Mobius::inverse))
        .enumerate()
        .map(|(j, m)| MobiusElement { matrix: m.sign_normalized(), word: vec![j as u8] })
        .collect()
}

/// Inradius and circumradius of the octagon, from the generator displacement.
pub fn octagon_radii(generators: &[MobiusElement]) -> (f64, f64) {
    let inradius = 0.5
        * generators
            .iter()
            .map(MobiusElement::displacement)
            .fold(f64::INFINITY, f64::min);
    let circumradius = (inradius.tanh() / FRAC_PI_8.cos()).atanh();
    (inradius, circumradius)
}

/// What an enumeration is guaranteed to contain.
#[derive(Debug, Clone, PartialEq)]
pub enum Coverage {
    /// Every element with displacement `≤ radius`.
    Ball { radius: f64 },
    /// Every element with displacement `≤ radius` whose translate of `D`
    /// meets the tube of `halfwidth` about the imaginary axis.
    AxisTube { halfwidth: f64, radius: f64 },
}

#[derive(Debug, Clone)]
pub struct EnumerationOptions {
    pub max_word_length: usize,
    /// Discard elements with displacement above this value.
    pub displacement_cap: Option<f64>,
    /// Restrict to translates that can meet the tube of this halfwidth about
    /// the imaginary axis.
    pub axis_tube: Option<f64>,
    pub tolerance: f64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            max_word_length: 8,
            displacement_cap: None,
            axis_tube: None,
            tolerance: DEDUP_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroupEnumeration {
    generators: Vec<MobiusElement>,
    elements: Vec<MobiusElement>,
    displacements: Vec<f64>,
    counts_by_length: Vec<usize>,
    inradius: f64,
    circumradius: f64,
    coverage: Coverage,
}

impl GroupEnumeration {
    pub fn generators(&self) -> &[MobiusElement] {
        &self.generators
    }

    pub fn elements(&self) -> &[MobiusElement] {
        &self.elements
    }

    pub fn displacements(&self) -> &[f64] {
        &self.displacements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Number of new elements found at each breadth-first depth (index 0 is the identity).
    pub fn counts_by_length(&self) -> &[usize] {
        &self.counts_by_length
    }

    pub fn diam_d(&self) -> f64 {
        2.0 * self.circumradius
    }

    pub fn circumradius(&self) -> f64 {
        self.circumradius
    }

    pub fn inradius(&self) -> f64 {
        self.inradius
    }

    pub fn coverage(&self) -> &Coverage {
        &self.coverage
    }

    /// Radius of the ball about `i` that is provably complete (zero for
    /// tube-restricted enumerations).
    pub fn certified_radius(&self) -> f64 {
        match self.coverage {
            Coverage::Ball { radius } => radius,
            Coverage::AxisTube { .. } => 0.0,
        }
    }

    /// Text table `word, a, b, c, d, displacement`.
    pub fn dump_table(&self) -> String {
        let mut out = String::from("word,a,b,c,d,displacement\n");
        for (e, d) in self.elements.iter().zip(&self.displacements) {
            let m = e.matrix;
            out.push_str(&format!(
                "{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
                e.word_string(),
                m.a,
                m.b,
                m.c,
                m.d,
                d
            ));
        }
        out
    }
}

/// Breadth-first enumeration of all elements of word length `≤ max_len`.
pub fn enumerate_group(generators: &[MobiusElement], max_len: usize) -> Result<GroupEnumeration> {
    if max_len > MAX_WORD_LENGTH {
        return Err(invalid(format!("word length {max_len} exceeds {MAX_WORD_LENGTH}")));
    }
    enumerate_with(
        generators,
        &EnumerationOptions { max_word_length: max_len, ..EnumerationOptions::default() },
    )
}

/// Orbit-point index: cells of a locally isometric grid in `(log y, x / y)`.
struct OrbitIndex {
    cells: HashMap<(i64, i64), Vec<usize>>,
}

const CELL: f64 = 0.05;

impl OrbitIndex {
    fn key(z: Complex64) -> (i64, i64) {
        ((z.im.ln() / CELL).floor() as i64, (z.re / z.im / CELL).floor() as i64)
    }

    fn find(&self, z: Complex64, points: &[Complex64], tol: f64) -> Option<usize> {
        let (a, b) = Self::key(z);
        for da in -1..=1 {
            for db in -1..=1 {
                if let Some(list) = self.cells.get(&(a + da, b + db)) {
                    for &idx in list {
                        if hyperbolic::distance(points[idx], z) < tol {
                            return Some(idx);
                        }
                    }
                }
            }
        }
        None
    }

    fn insert(&mut self, z: Complex64, idx: usize) {
        self.cells.entry(Self::key(z)).or_default().push(idx);
    }
}

/// Breadth-first enumeration with optional pruning.
pub fn enumerate_with(generators: &[MobiusElement], opts: &EnumerationOptions) -> Result<GroupEnumeration> {
    if !generators.len().is_multiple_of(2) {
        return Err(invalid("generators must come with their inverses"));
    }
    for g in generators {
        if (g.matrix.det() - 1.0).abs() > 1e-10 {
            return Err(invalid(format!("generator {} is not determinant one", g.word_string())));
        }
    }
    let half = generators.len() / 2;
    let (inradius, circumradius) = octagon_radii(generators);
    let cap = opts.displacement_cap.unwrap_or(f64::INFINITY);
    // A translate meeting the tube has its centre within `r + r_c`, and every
    // tile on the path to it has its centre within another `r_c`.
    let axis_width = opts.axis_tube.map(|r| r + 2.0 * circumradius + 1e-9);

    let i = Complex64::i();
    let mut elements = vec![MobiusElement::identity()];
    let mut points = vec![i];
    let mut displacements = vec![0.0];
    let mut index = OrbitIndex { cells: HashMap::new() };
    index.insert(i, 0);
    let mut counts_by_length = vec![1];
    let mut frontier = vec![0usize];

    for _depth in 1..=opts.max_word_length {
        let mut next = Vec::new();
        for &parent in &frontier {
            let last = elements[parent].word.last().copied();
            for (gi, g) in generators.iter().enumerate() {
                if let Some(l) = last {
                    if (l as usize + half) % generators.len() == gi {
                        continue;
                    }
                }
                let m = (elements[parent].matrix * g.matrix).sign_normalized();
                let z = m.apply(i);
                let d = hyperbolic::distance(i, z);
                if d > cap {
                    continue;
                }
                if let Some(w) = axis_width {
                    if hyperbolic::distance_to_imaginary_axis(z) > w {
                        continue;
                    }
                }
                if let Some(existing) = index.find(z, &points, opts.tolerance) {
                    if (displacements[existing] - d).abs() > 1e-6 * (1.0 + d)
                        || elements[existing].matrix.matrix_distance(&m) > 1e-6 * (1.0 + d).exp()
                    {
                        let mut word = elements[parent].word.clone();
                        word.push(gi as u8);
                        return Err(Error::DedupConflict {
                            first: elements[existing].word_string(),
                            second: MobiusElement { matrix: m, word }.word_string(),
                        });
                    }
                    continue;
                }
                let mut word = elements[parent].word.clone();
                word.push(gi as u8);
                let idx = elements.len();
                elements.push(MobiusElement { matrix: m, word });
                points.push(z);
                displacements.push(d);
                index.insert(z, idx);
                next.push(idx);
            }
        }
        counts_by_length.push(next.len());
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }

    let shell_min = frontier
        .iter()
        .filter(|&&idx| displacements[idx] > 0.0)
        .map(|&idx| displacements[idx])
        .fold(f64::INFINITY, f64::min);
    let reach = cap.min(shell_min);
    let coverage = match opts.axis_tube {
        None => Coverage::Ball { radius: (reach - circumradius).max(0.0) },
        Some(r) => Coverage::AxisTube {
            halfwidth: r,
            radius: (reach - circumradius).max(0.0),
        },
    };

    Ok(GroupEnumeration {
        generators: generators.to_vec(),
        elements,
        displacements,
        counts_by_length,
        inradius,
        circumradius,
        coverage,
    })
}

/// Sample of the octagon `D` for tube-intersection tests: geodesic polar grid
/// out to the boundary plus the vertices, with a bound on how far any point
/// of `D` can be from the nearest sample.
#[derive(Debug, Clone)]
pub struct DomainSample {
    pub points: Vec<Complex64>,
    pub mesh: f64,
}

impl DomainSample {
    pub fn octagon(inradius: f64, circumradius: f64, angles: usize, radial: usize) -> Self {
        let boundary = |phi: f64| {
            // Offset to the nearest side normal (normals at π/2 + jπ/4).
            let t = (phi - FRAC_PI_2).rem_euclid(FRAC_PI_4);
            let psi = t.min(FRAC_PI_4 - t);
            (inradius.tanh() / psi.cos()).atanh()
        };
        let polar = |r: f64, phi: f64| {
            Mobius::rotation_about_i(phi - FRAC_PI_2).apply(Complex64::new(0.0, r.exp()))
        };
        let dphi = std::f64::consts::TAU / angles as f64;
        let mut points = vec![Complex64::i()];
        let mut variation = 0.0f64;
        for k in 0..angles {
            let phi = k as f64 * dphi;
            let rho = boundary(phi);
            for j in 1..=radial {
                points.push(polar(rho * j as f64 / radial as f64, phi));
            }
            for q in 1..=16 {
                let off = 0.5 * dphi * q as f64 / 16.0;
                variation = variation
                    .max((boundary(phi + off) - rho).abs())
                    .max((boundary(phi - off) - rho).abs());
            }
        }
        for j in 0..8 {
            points.push(polar(circumradius, FRAC_PI_2 + FRAC_PI_8 + j as f64 * FRAC_PI_4));
        }
        let mesh = circumradius.sinh() * 0.5 * dphi + 0.5 * circumradius / radial as f64 + variation;
        Self { points, mesh }
    }
}

/// One dyadic annulus `[2^k, 2^{k+1})` of displacements.
#[derive(Debug, Clone, PartialEq)]
pub struct AnnulusRow {
    pub k: u32,
    pub all_count: usize,
    pub tube_count: usize,
    /// The enumeration provably contains every element of this annulus.
    pub all_certified: bool,
    /// The enumeration provably contains every tube-meeting element of this annulus.
    pub tube_certified: bool,
}

#[derive(Debug, Clone)]
pub struct AnnulusTable {
    pub rows: Vec<AnnulusRow>,
    pub halfwidth: f64,
    pub sampling_slack: f64,
}

impl AnnulusTable {
    pub fn row(&self, k: u32) -> Option<&AnnulusRow> {
        self.rows.iter().find(|r| r.k == k)
    }
}

/// Whether `α(D)` meets the tube of halfwidth `r` about the complete
/// geodesic whose frame is `axis` (sampling test, superset up to `slack`).
fn meets_tube(alpha: &Mobius, to_axis: &Mobius, sample: &DomainSample, circumradius: f64, r: f64) -> bool {
    let centre = to_axis.apply(alpha.apply(Complex64::i()));
    let dc = hyperbolic::distance_to_imaginary_axis(centre);
    if dc - circumradius > r + sample.mesh {
        return false;
    }
    if dc <= r {
        return true;
    }
    let m = *to_axis * *alpha;
    sample
        .points
        .iter()
        .any(|&p| hyperbolic::distance_to_imaginary_axis(m.apply(p)) <= r + sample.mesh)
}

/// Dyadic displacement counts of all enumerated elements and of those whose
/// translate of `D` meets the tube `T_R(γ̃)` about `axis`.
pub fn annulus_counts(
    enumeration: &GroupEnumeration,
    axis: &crate::manifolds::GeodesicSegment,
    halfwidth: f64,
    k_max: u32,
) -> AnnulusTable {
    let sample = DomainSample::octagon(enumeration.inradius, enumeration.circumradius, 256, 16);
    let to_axis = Mobius::frame_at(
        Complex64::new(axis.base.coords[0], axis.base.coords[1]),
        axis.direction,
    )
    .inverse();
    let axis_is_imaginary = (axis.base.coords[0]).abs() < 1e-12
        && axis.direction[0].abs() < 1e-12;
    let mut all = vec![0usize; k_max as usize + 1];
    let mut tube = vec![0usize; k_max as usize + 1];
    for (e, &d) in enumeration.elements.iter().zip(&enumeration.displacements) {
        if d < 1.0 {
            continue;
        }
        let k = d.log2().floor() as usize;
        if k > k_max as usize {
            continue;
        }
        all[k] += 1;
        if meets_tube(&e.matrix, &to_axis, &sample, enumeration.circumradius, halfwidth) {
            tube[k] += 1;
        }
    }
    let rows = (0..=k_max)
        .map(|k| {
            let top = 2f64.powi(k as i32 + 1);
            let (all_ok, tube_ok) = match enumeration.coverage {
                Coverage::Ball { radius } => (radius >= top, radius >= top),
                Coverage::AxisTube { halfwidth: h, radius } => {
                    (false, axis_is_imaginary && h >= halfwidth + sample.mesh && radius >= top)
                }
            };
            AnnulusRow {
                k,
                all_count: all[k as usize],
                tube_count: tube[k as usize],
                all_certified: all_ok,
                tube_certified: tube_ok,
            }
        })
        .collect();
    AnnulusTable { rows, halfwidth, sampling_slack: sample.mesh }
}

/// Number of elements with displacement `≤ ρ` for each certified `ρ`.
pub fn ball_counts(enumeration: &GroupEnumeration, radii: &[f64]) -> Vec<(f64, usize)> {
    let mut sorted = enumeration.displacements.clone();
    sorted.sort_by(f64::total_cmp);
    radii
        .iter()
        .filter(|&&r| r <= enumeration.certified_radius())
        .map(|&r| (r, sorted.partition_point(|&d| d <= r)))
        .collect()
}
