#include "zenochain/fock.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace zenochain {

namespace {

// Occupation-descending lexicographic comparison.
bool tuple_before(std::span<const int> a, std::span<const int> b) {
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

void enumerate_sector_tuples(int modes, int total, std::vector<int>& prefix,
                             std::vector<int>& out) {
    if (modes == 1) {
        out.insert(out.end(), prefix.begin(), prefix.end());
        out.push_back(total);
        return;
    }
    for (int n = total; n >= 0; --n) {
        prefix.push_back(n);
        enumerate_sector_tuples(modes - 1, total - n, prefix, out);
        prefix.pop_back();
    }
}

void enumerate_truncated_tuples(const std::vector<int>& cutoffs, std::size_t mode,
                                std::vector<int>& prefix, std::vector<int>& out) {
    if (mode == cutoffs.size()) {
        out.insert(out.end(), prefix.begin(), prefix.end());
        return;
    }
    for (int n = cutoffs[mode]; n >= 0; --n) {
        prefix.push_back(n);
        enumerate_truncated_tuples(cutoffs, mode + 1, prefix, out);
        prefix.pop_back();
    }
}

std::string tuple_string(std::span<const int> occ) {
    std::string s = "(";
    for (std::size_t i = 0; i < occ.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(occ[i]);
    }
    return s + ")";
}

}  // namespace

FockBasis FockBasis::sector(int mode_count, int total_excitations) {
    if (mode_count < 1) throw std::invalid_argument("FockBasis: mode_count must be >= 1");
    if (total_excitations < 0)
        throw std::invalid_argument("FockBasis: total_excitations must be >= 0");
    FockBasis b;
    b.mode_count_ = mode_count;
    b.kind_ = BasisKind::Sector;
    b.total_ = total_excitations;
    std::vector<int> prefix;
    enumerate_sector_tuples(mode_count, total_excitations, prefix, b.flat_);
    b.size_ = b.flat_.size() / static_cast<std::size_t>(mode_count);
    return b;
}

FockBasis FockBasis::truncated(std::vector<int> cutoffs) {
    if (cutoffs.empty()) throw std::invalid_argument("FockBasis: cutoffs must be nonempty");
    for (int c : cutoffs)
        if (c < 0) throw std::invalid_argument("FockBasis: cutoffs must be >= 0");
    FockBasis b;
    b.mode_count_ = static_cast<int>(cutoffs.size());
    b.kind_ = BasisKind::Truncated;
    b.cutoffs_ = std::move(cutoffs);
    std::vector<int> prefix;
    enumerate_truncated_tuples(b.cutoffs_, 0, prefix, b.flat_);
    b.size_ = b.flat_.size() / static_cast<std::size_t>(b.mode_count_);
    return b;
}

int FockBasis::total_excitations() const {
    if (kind_ != BasisKind::Sector)
        throw std::logic_error("FockBasis: total_excitations on a truncated basis");
    return total_;
}

const std::vector<int>& FockBasis::cutoffs() const {
    if (kind_ != BasisKind::Truncated)
        throw std::logic_error("FockBasis: cutoffs on a sector basis");
    return cutoffs_;
}

std::span<const int> FockBasis::occupations(std::size_t index) const {
    if (index >= size_) throw std::out_of_range("FockBasis: index out of range");
    return {flat_.data() + index * static_cast<std::size_t>(mode_count_),
            static_cast<std::size_t>(mode_count_)};
}

std::optional<std::size_t> FockBasis::find(std::span<const int> occ) const {
    if (static_cast<int>(occ.size()) != mode_count_) return std::nullopt;
    std::size_t lo = 0, hi = size_;
    while (lo < hi) {
        std::size_t mid = (lo + hi) / 2;
        if (tuple_before(occupations(mid), occ))
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo == size_) return std::nullopt;
    auto cand = occupations(lo);
    if (std::equal(cand.begin(), cand.end(), occ.begin())) return lo;
    return std::nullopt;
}

std::size_t FockBasis::index_of(std::span<const int> occ) const {
    auto idx = find(occ);
    if (!idx)
        throw std::out_of_range("FockBasis: occupation tuple " + tuple_string(occ) +
                                " is not a member of the basis");
    return *idx;
}

bool FockBasis::operator==(const FockBasis& other) const {
    if (kind_ != other.kind_ || mode_count_ != other.mode_count_) return false;
    return kind_ == BasisKind::Sector ? total_ == other.total_ : cutoffs_ == other.cutoffs_;
}

StateVector::StateVector(FockBasis basis)
    : basis_(std::move(basis)), amps_(Vector::Zero(static_cast<Eigen::Index>(basis_.size()))) {}

StateVector::StateVector(FockBasis basis, Vector amplitudes)
    : basis_(std::move(basis)), amps_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amps_.size()) != basis_.size())
        throw std::invalid_argument("StateVector: amplitude count does not match basis size");
}

Complex StateVector::amplitude(std::span<const int> occ) const {
    return amps_(static_cast<Eigen::Index>(basis_.index_of(occ)));
}

void StateVector::set_amplitude(std::span<const int> occ, Complex value) {
    amps_(static_cast<Eigen::Index>(basis_.index_of(occ))) = value;
}

StateVector StateVector::normalized() const {
    double n = norm();
    if (n <= 0.0) throw std::invalid_argument("StateVector: cannot normalize a zero state");
    return StateVector(basis_, amps_ / n);
}

DensityOperator::DensityOperator(FockBasis basis, Matrix matrix)
    : basis_(std::move(basis)), mat_(std::move(matrix)) {
    if (static_cast<std::size_t>(mat_.rows()) != basis_.size() || mat_.rows() != mat_.cols())
        throw std::invalid_argument("DensityOperator: matrix shape does not match basis");
}

DensityOperator DensityOperator::from_pure(const StateVector& state) {
    return DensityOperator(state.basis(), state.amplitudes() * state.amplitudes().adjoint());
}

StateVector fock_state(const FockBasis& basis, std::span<const int> occupations) {
    StateVector s(basis);
    s.set_amplitude(occupations, Complex(1.0, 0.0));
    return s;
}

StateVector coherent_amplitudes(Complex alpha, int cutoff) {
    if (cutoff < 1) throw std::invalid_argument("coherent_amplitudes: cutoff must be >= 1");
    FockBasis basis = FockBasis::truncated({cutoff});
    StateVector s(basis);
    Complex term = std::exp(-0.5 * std::norm(alpha));  // n = 0
    for (int n = 0; n <= cutoff; ++n) {
        int occ[1] = {n};
        s.set_amplitude(occ, term);
        term *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    return s;
}

Matrix hopping_operator(const FockBasis& basis, int to_mode, int from_mode) {
    if (to_mode < 0 || to_mode >= basis.mode_count() || from_mode < 0 ||
        from_mode >= basis.mode_count() || to_mode == from_mode)
        throw std::invalid_argument("hopping_operator: bad mode indices");
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Matrix op = Matrix::Zero(dim, dim);
    std::vector<int> target(static_cast<std::size_t>(basis.mode_count()));
    for (std::size_t col = 0; col < basis.size(); ++col) {
        auto occ = basis.occupations(col);
        if (occ[static_cast<std::size_t>(from_mode)] == 0) continue;
        std::copy(occ.begin(), occ.end(), target.begin());
        target[static_cast<std::size_t>(from_mode)] -= 1;
        target[static_cast<std::size_t>(to_mode)] += 1;
        auto row = basis.find(target);
        if (!row) continue;  // clipped by truncation
        double amp = std::sqrt(static_cast<double>(occ[static_cast<std::size_t>(from_mode)]) *
                               (occ[static_cast<std::size_t>(to_mode)] + 1.0));
        op(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) = amp;
    }
    return op;
}

Matrix number_operator(const FockBasis& basis, int mode) {
    if (mode < 0 || mode >= basis.mode_count())
        throw std::invalid_argument("number_operator: bad mode index");
    const auto dim = static_cast<Eigen::Index>(basis.size());
    Matrix op = Matrix::Zero(dim, dim);
    for (std::size_t i = 0; i < basis.size(); ++i)
        op(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) =
            basis.occupations(i)[static_cast<std::size_t>(mode)];
    return op;
}

Matrix annihilation_operator(const FockBasis& from, const FockBasis& to, int mode) {
    if (mode < 0 || mode >= from.mode_count() || from.mode_count() != to.mode_count())
        throw std::invalid_argument("annihilation_operator: incompatible bases or mode");
    Matrix op = Matrix::Zero(static_cast<Eigen::Index>(to.size()),
                             static_cast<Eigen::Index>(from.size()));
    std::vector<int> target(static_cast<std::size_t>(from.mode_count()));
    for (std::size_t col = 0; col < from.size(); ++col) {
        auto occ = from.occupations(col);
        int n = occ[static_cast<std::size_t>(mode)];
        if (n == 0) continue;
        std::copy(occ.begin(), occ.end(), target.begin());
        target[static_cast<std::size_t>(mode)] -= 1;
        auto row = to.find(target);
        if (!row) continue;
        op(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) = std::sqrt(n);
    }
    return op;
}

bool is_hermitian(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, m.cwiseAbs().maxCoeff());
}

Matrix expi_hermitian(const Matrix& hamiltonian, double t) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hamiltonian);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("expi_hermitian: eigendecomposition failed");
    const auto& w = es.eigenvalues();
    Vector phases(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k)
        phases(k) = std::exp(Complex(0.0, -w(k) * t));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

double occupation_moment(const StateVector& state, int mode, int power) {
    if (mode < 0 || mode >= state.basis().mode_count())
        throw std::invalid_argument("occupation_moment: bad mode index");
    double n2 = state.norm_squared();
    if (n2 <= 0.0) throw std::invalid_argument("occupation_moment: zero state");
    double acc = 0.0;
    for (std::size_t i = 0; i < state.basis().size(); ++i) {
        double n = state.basis().occupations(i)[static_cast<std::size_t>(mode)];
        acc += std::pow(n, power) * std::norm(state.amplitudes()(static_cast<Eigen::Index>(i)));
    }
    return acc / n2;
}

double mean_occupation(const StateVector& state, int mode) {
    return occupation_moment(state, mode, 1);
}

double total_mean_occupation(const StateVector& state) {
    double acc = 0.0;
    for (int m = 0; m < state.basis().mode_count(); ++m) acc += mean_occupation(state, m);
    return acc;
}

namespace {

struct SplitIndex {
    std::vector<std::size_t> kept_id;   // per basis element: index into kept tuple list
    std::vector<std::size_t> rest_id;   // per basis element: index into rest tuple list
    std::vector<std::vector<int>> kept_tuples;
    std::size_t rest_count = 0;
};

SplitIndex split_bipartition(const FockBasis& basis, std::span<const int> keep_modes) {
    std::vector<bool> keep(static_cast<std::size_t>(basis.mode_count()), false);
    for (int m : keep_modes) {
        if (m < 0 || m >= basis.mode_count())
            throw std::invalid_argument("bipartition: mode index out of range");
        if (keep[static_cast<std::size_t>(m)])
            throw std::invalid_argument("bipartition: repeated mode index");
        keep[static_cast<std::size_t>(m)] = true;
    }
    if (keep_modes.empty() || keep_modes.size() >= static_cast<std::size_t>(basis.mode_count()))
        throw std::invalid_argument("bipartition: group must be a proper nonempty subset of modes");

    std::map<std::vector<int>, std::size_t, std::greater<>> kept_ids, rest_ids;
    SplitIndex out;
    out.kept_id.resize(basis.size());
    out.rest_id.resize(basis.size());
    std::vector<int> kt, rt;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        auto occ = basis.occupations(i);
        kt.clear();
        rt.clear();
        for (int m = 0; m < basis.mode_count(); ++m)
            (keep[static_cast<std::size_t>(m)] ? kt : rt).push_back(occ[static_cast<std::size_t>(m)]);
        out.kept_id[i] = kept_ids.emplace(kt, kept_ids.size()).first->second;
        out.rest_id[i] = rest_ids.emplace(rt, rest_ids.size()).first->second;
    }
    out.kept_tuples.resize(kept_ids.size());
    for (auto& [tuple, id] : kept_ids) out.kept_tuples[id] = tuple;
    out.rest_count = rest_ids.size();
    return out;
}

}  // namespace

Matrix reduced_density_matrix(const StateVector& state, std::span<const int> keep_modes,
                              std::vector<std::vector<int>>* kept_tuples) {
    double n2 = state.norm_squared();
    if (n2 <= 0.0) throw std::invalid_argument("reduced_density_matrix: zero state");
    SplitIndex split = split_bipartition(state.basis(), keep_modes);

    // Group basis elements by the traced-out tuple, then accumulate outer
    // products of the kept-index amplitudes.
    std::vector<std::vector<std::size_t>> by_rest(split.rest_count);
    for (std::size_t i = 0; i < state.basis().size(); ++i) by_rest[split.rest_id[i]].push_back(i);

    const auto dim = static_cast<Eigen::Index>(split.kept_tuples.size());
    Matrix rho = Matrix::Zero(dim, dim);
    const Vector& a = state.amplitudes();
    for (const auto& group : by_rest)
        for (std::size_t i : group)
            for (std::size_t j : group)
                rho(static_cast<Eigen::Index>(split.kept_id[i]),
                    static_cast<Eigen::Index>(split.kept_id[j])) +=
                    a(static_cast<Eigen::Index>(i)) * std::conj(a(static_cast<Eigen::Index>(j)));
    rho /= n2;
    if (kept_tuples) *kept_tuples = std::move(split.kept_tuples);
    return rho;
}

double entanglement_entropy(const StateVector& state, std::span<const int> first_group) {
    Matrix rho = reduced_density_matrix(state, first_group);
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
    double entropy = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        double p = es.eigenvalues()(k);
        if (p > kEntropyEigFloor) entropy -= p * std::log(p);
    }
    return entropy;
}

double reduced_purity(const StateVector& state, std::span<const int> keep_modes) {
    Matrix rho = reduced_density_matrix(state, keep_modes);
    return (rho * rho).trace().real();
}

}  // namespace zenochain
