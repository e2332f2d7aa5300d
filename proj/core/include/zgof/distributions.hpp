#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace zgof {

// A fully specified discrete distribution over k ordered cells.
// Construction validates k >= 2, each probability in [0, 1], and a total
// within 1e-9 of one; the values themselves are stored exactly as given.
class CellProbabilities {
public:
    static constexpr double kSumTolerance = 1e-9;

    explicit CellProbabilities(std::vector<double> probs, std::string label = "");

    std::span<const double> probs() const noexcept { return probs_; }
    std::size_t k() const noexcept { return probs_.size(); }
    const std::string& label() const noexcept { return label_; }
    double operator[](std::size_t i) const noexcept { return probs_[i]; }

    bool has_zero_cell() const noexcept;

private:
    std::vector<double> probs_;
    std::string label_;
};

CellProbabilities make_cell_probabilities(std::vector<double> values, std::string label = "");

// Strict alternation classification. A distribution qualifies when every
// adjacent pair strictly alternates direction (p1 < p2 > p3 < ... or
// p1 > p2 < p3 > ...); a tie anywhere disqualifies it.
enum class ZigzagPattern { rising_start, falling_start, none };

std::string_view to_token(ZigzagPattern pattern) noexcept;

struct ZigzagReport {
    bool is_zigzag = false;
    ZigzagPattern pattern = ZigzagPattern::none;
    // 1-based index of the first adjacent pair (cells i, i+1) where strict
    // alternation fails; absent iff the distribution is zig-zag.
    std::optional<std::size_t> first_violation;
};

ZigzagReport classify_zigzag(const CellProbabilities& cp);

// Beta-binomial trend family over k cells. a = b = 1 is the discrete
// uniform; a = b > 1 is unimodal symmetric; 0 < a = b < 1 is bath-tub.
struct BetaBinomialParams {
    double a = 1.0;
    double b = 1.0;
    std::int64_t k = 2;
};

CellProbabilities beta_binomial(const BetaBinomialParams& params);
CellProbabilities beta_binomial(double a, double b, std::int64_t k);

// The built-in catalog of null and alternative distributions. Raw rows are
// kept verbatim even where they fail validation; `resolved` is the
// corrected distribution actually used in studies, and `provenance_note`
// records what (if anything) was done to obtain it.
struct CatalogEntry {
    std::string name;
    std::vector<double> raw;
    CellProbabilities resolved;
    std::string provenance_note;
};

const std::vector<std::string>& catalog_names();
CatalogEntry catalog(std::string_view name);
std::vector<CatalogEntry> full_catalog();

// E_i = n * p_i for each cell.
std::vector<double> expected_frequencies(const CellProbabilities& cp, std::int64_t n);

// H_i = p_1 + ... + p_i, clamped so the sequence is nondecreasing and the
// final entry is exactly 1.
std::vector<double> cumulative_probabilities(const CellProbabilities& cp);

}  // namespace zgof
