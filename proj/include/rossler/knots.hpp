#ifndef ROSSLER_KNOTS_HPP
#define ROSSLER_KNOTS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rossler/flow.hpp"

namespace rossler {

class NonGenericProjection : public std::runtime_error {
public:
    explicit NonGenericProjection(const std::string& what) : std::runtime_error(what) {}
};

class DegenerateDiagram : public std::runtime_error {
public:
    explicit DegenerateDiagram(const std::string& what) : std::runtime_error(what) {}
};

// Signed Gauss code: the crossing visits met along the traversal. Every
// crossing id appears exactly twice, once over and once under, with one sign.
struct GaussCode {
    struct Entry {
        int id = 0;
        bool over = false;
        int sign = 0;
    };
    std::vector<Entry> seq;

    std::size_t crossings() const { return seq.size() / 2; }
};

// Alexander polynomial, integer coefficients with degree 0 first, normalized:
// no trailing zeros, positive leading coefficient, and the reversal-canonical
// representative of the t <-> 1/t symmetry class.
struct AlexPoly {
    std::vector<long long> coeffs{1};

    bool operator==(const AlexPoly& o) const { return coeffs == o.coeffs; }
    long long at_one() const;
    bool palindromic_up_to_sign() const;
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    std::string str() const;
};

AlexPoly normalize_poly(std::vector<long long> c);

// Diagram of a closed polyline under orthogonal projection along `direction`.
// Throws NonGenericProjection on vertex coincidences, near-tangent crossings
// (|sin| <= 1e-3) or unresolved depths; callers retry with a perturbed
// direction. Curves longer than 2e4 segments are resampled first.
GaussCode gauss_code(const std::vector<State3>& closed_curve, const State3& direction);

// Reidemeister I/II reduction on the code level.
GaussCode reduce_code(GaussCode code);

// Fox-calculus Alexander matrix of the diagram, one row and column deleted,
// determinant over Z[t]. Empty code gives 1.
AlexPoly alexander(const GaussCode& code);

// (t^{pq}-1)(t-1) / ((t^p-1)(t^q-1))
AlexPoly torus_alexander(int p, int q);

// Match against torus-knot polynomials for coprime 2 <= p < q <= max_pq.
std::optional<std::pair<int, int>> torus_knot_id(const AlexPoly& poly, int max_pq);

// Periodic orbit of a cyclic word over {1,2} on a concrete embedding of the
// two-strip L(0,1) template: strands ordered on the branch line by the shift
// order of the word's rotations (symbol 1 preserves the order, symbol 2
// reverses it through one half-twist, left strand over). At the re-join the
// twisted strip passes in front. Under this convention the orbits through
// period 4 are unknots and the trefoil first appears at period 5, as on the
// suspended-horseshoe template. Requires a primitive word.
std::vector<State3> template_embed(const std::string& word);

// Primitive (non-power) cyclic words over {1,2} in minimal rotation, all
// lengths 1..max_len, sorted by length then lexicographically.
std::vector<std::string> enumerate_words(int max_len);

// Retry wrapper: random projection directions until one is generic.
AlexPoly alexander_of_closed_curve(const std::vector<State3>& curve,
                                   std::uint64_t rng_seed, int max_tries = 60);

std::vector<State3> resample_closed(const std::vector<State3>& curve,
                                    std::size_t max_segments = 20000);

}  // namespace rossler

#endif
