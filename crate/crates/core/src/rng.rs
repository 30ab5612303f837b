//! Seeded pseudo-random numbers with a fully specified algorithm, so that
//! sample sets are reproducible bit for bit on every platform.
//!
//! * state initialisation: SplitMix64 applied to the seed
//!   (increment 0x9E3779B97F4A7C15, multipliers 0xBF58476D1CE4E5B9 and
//!   0x94D049BB133111EB, shifts 30/27/31);
//! * generator: xorshift64* (shifts 12, 25, 27; multiplier
//!   0x2545F4914F6CDD1D);
//! * uniform doubles: top 53 bits of the output times 2⁻⁵³;
//! * normals: Box–Muller, both outputs used in order.
//!
//! Independent streams for parallel sampling come from [`Rng::stream`],
//! which seeds a fresh generator from (seed, index).

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Debug, Clone)]
pub struct Rng {
    state: u64,
    spare_normal: Option<f64>,
}

impl Rng {
    pub fn new(seed: u64) -> Self {
        let mut s = seed;
        let mut state = splitmix64(&mut s);
        if state == 0 {
            state = GOLDEN;
        }
        Self { state, spare_normal: None }
    }

    /// Generator for sample `index` of a run seeded with `seed`.
    pub fn stream(seed: u64, index: u64) -> Self {
        let mut s = seed ^ index.wrapping_mul(0xD6E8_FEB8_6659_FD93);
        Self::new(splitmix64(&mut s))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(0x2545_F491_4F6C_DD1D)
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let t = std::f64::consts::TAU * u2;
        self.spare_normal = Some(r * t.sin());
        r * t.cos()
    }

    pub fn normals<const N: usize>(&mut self) -> [f64; N] {
        std::array::from_fn(|_| self.normal())
    }

    /// Uniformly distributed point on the unit sphere in ℝᴺ.
    pub fn unit_vector<const N: usize>(&mut self) -> [f64; N] {
        loop {
            let v: [f64; N] = self.normals();
            let n = v.iter().map(|t| t * t).sum::<f64>().sqrt();
            if n > 1e-6 {
                return v.map(|t| t / n);
            }
        }
    }
}
