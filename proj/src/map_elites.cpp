#include "sela/map_elites.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <utility>

#include "sela/format.hpp"

namespace sela::map_elites {

CellIndex bin(const Descriptor& descriptor, std::span<const int> grid_shape)
{
    if (static_cast<std::size_t>(descriptor.size()) != grid_shape.size())
        throw std::invalid_argument("bin: descriptor and grid dimensions differ");
    CellIndex cell(grid_shape.size());
    for (std::size_t i = 0; i < grid_shape.size(); ++i) {
        const double d = std::clamp(descriptor[static_cast<Eigen::Index>(i)], 0.0, 1.0);
        const int n = grid_shape[i];
        cell[i] = std::min(static_cast<int>(std::floor(d * n)), n - 1);
    }
    return cell;
}

Archive::Archive(std::vector<int> grid_shape, std::size_t behavior_dim, std::size_t outcome_dim)
    : grid_shape_(std::move(grid_shape)), behavior_dim_(behavior_dim), outcome_dim_(outcome_dim)
{
    if (grid_shape_.empty())
        throw std::invalid_argument("Archive: grid needs at least one dimension");
    for (int n : grid_shape_)
        if (n <= 0)
            throw std::invalid_argument("Archive: grid sizes must be positive");
    if (behavior_dim_ == 0 || outcome_dim_ == 0)
        throw std::invalid_argument("Archive: behavior and outcome dimensions must be positive");
}

CellIndex Archive::bin(const Descriptor& descriptor) const
{
    return map_elites::bin(descriptor, grid_shape_);
}

OfferResult Archive::offer(Elite candidate)
{
    if (static_cast<std::size_t>(candidate.behavior.size()) != behavior_dim_ ||
        static_cast<std::size_t>(candidate.outcome.size()) != outcome_dim_)
        throw std::invalid_argument("Archive::offer: candidate has wrong dimensions");
    candidate.descriptor = candidate.descriptor.cwiseMax(0.0).cwiseMin(1.0);
    auto cell = bin(candidate.descriptor);
    auto it = cells_.find(cell);
    if (it == cells_.end()) {
        cells_.emplace(std::move(cell), std::move(candidate));
        return OfferResult::Inserted;
    }
    if (candidate.performance > it->second.performance) {
        it->second = std::move(candidate);
        return OfferResult::Replaced;
    }
    return OfferResult::Rejected;
}

const Elite* Archive::find(const CellIndex& cell) const
{
    const auto it = cells_.find(cell);
    return it == cells_.end() ? nullptr : &it->second;
}

std::size_t Archive::total_cells() const
{
    std::size_t total = 1;
    for (int n : grid_shape_)
        total *= static_cast<std::size_t>(n);
    return total;
}

double Archive::coverage() const
{
    return static_cast<double>(cells_.size()) / static_cast<double>(total_cells());
}

const Elite& Archive::best() const
{
    if (cells_.empty())
        throw std::logic_error("Archive::best: empty archive");
    const auto it = std::max_element(cells_.begin(), cells_.end(), [](const auto& a, const auto& b) {
        return a.second.performance < b.second.performance;
    });
    return it->second;
}

bool operator==(const Archive& a, const Archive& b)
{
    if (a.grid_shape_ != b.grid_shape_ || a.behavior_dim_ != b.behavior_dim_ ||
        a.outcome_dim_ != b.outcome_dim_ || a.cells_.size() != b.cells_.size())
        return false;
    return std::equal(a.cells_.begin(), a.cells_.end(), b.cells_.begin(),
                      [](const auto& x, const auto& y) {
                          return x.first == y.first && x.second.behavior == y.second.behavior &&
                                 x.second.descriptor == y.second.descriptor &&
                                 x.second.performance == y.second.performance &&
                                 x.second.outcome == y.second.outcome;
                      });
}

std::size_t initial_batch_size(const IlluminateConfig& config)
{
    const auto fraction = static_cast<std::size_t>(
        std::ceil(config.initial_batch_fraction * static_cast<double>(config.budget)));
    return std::min(config.budget, std::max(config.min_initial_batch, fraction));
}

Archive illuminate(const Evaluator& evaluator, const IlluminateConfig& config,
                   const OfferObserver& observer)
{
    if (config.budget == 0)
        throw std::invalid_argument("illuminate: budget must be positive");
    if (config.lower.size() == 0 || config.lower.size() != config.upper.size() ||
        (config.upper - config.lower).minCoeff() < 0.0)
        throw std::invalid_argument("illuminate: bad behavior domain");

    const auto dim = static_cast<std::size_t>(config.lower.size());
    Archive archive(config.grid_shape, dim, config.outcome_dim);
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Eigen::VectorXd width = config.upper - config.lower;

    auto evaluate_and_offer = [&](std::size_t index, const BehaviorPoint& behavior) {
        Evaluation e = evaluator(behavior);
        Elite candidate{behavior, std::move(e.descriptor), e.performance, std::move(e.outcome)};
        const OfferResult result = archive.offer(candidate);
        if (observer)
            observer(index, candidate, result);
    };

    const std::size_t initial = initial_batch_size(config);
    for (std::size_t i = 0; i < initial; ++i) {
        BehaviorPoint x(static_cast<Eigen::Index>(dim));
        for (std::size_t j = 0; j < dim; ++j)
            x[j] = config.lower[j] + unit(rng) * width[j];
        evaluate_and_offer(i, x);
    }

    // Parent selection indexes into a flat list of occupied cells; it is
    // refreshed only when a new cell appears since replacements keep keys.
    std::vector<CellIndex> occupied;
    auto refresh = [&]() {
        occupied.clear();
        for (const auto& [cell, elite] : archive.cells())
            occupied.push_back(cell);
    };
    refresh();

    for (std::size_t i = initial; i < config.budget; ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, occupied.size() - 1);
        const Elite& parent = *archive.find(occupied[pick(rng)]);
        BehaviorPoint child = parent.behavior;
        for (std::size_t j = 0; j < dim; ++j) {
            child[j] += config.mutation_sigma * width[j] * gauss(rng);
            child[j] = std::clamp(child[j], config.lower[j], config.upper[j]);
        }
        const std::size_t before = archive.size();
        evaluate_and_offer(i, child);
        if (archive.size() != before)
            refresh();
    }
    return archive;
}

ArchiveParseError::ArchiveParseError(std::size_t line, const std::string& what)
    : std::runtime_error("archive line " + std::to_string(line) + ": " + what), line_(line)
{
}

namespace {

std::string join_ints(const std::vector<int>& v, char sep)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0)
            out += sep;
        out += std::to_string(v[i]);
    }
    return out;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return parts;
}

std::string_view expect_field(std::string_view token, std::string_view key, std::size_t line)
{
    if (token.size() <= key.size() || token.substr(0, key.size()) != key ||
        token[key.size()] != '=')
        throw ArchiveParseError(line, "expected field '" + std::string(key) + "='");
    return token.substr(key.size() + 1);
}

long long parse_count(std::string_view text, std::size_t line, const char* what)
{
    long long v = 0;
    if (!parse_int(text, v))
        throw ArchiveParseError(line, std::string("malformed ") + what);
    return v;
}

Eigen::VectorXd parse_numbers(std::string_view text, std::size_t expected, std::size_t line,
                              const char* what)
{
    const auto parts = split(text, ',');
    if (parts.size() != expected)
        throw ArchiveParseError(line, std::string(what) + " has " + std::to_string(parts.size()) +
                                          " values, expected " + std::to_string(expected));
    Eigen::VectorXd v(static_cast<Eigen::Index>(expected));
    for (std::size_t i = 0; i < expected; ++i) {
        double x = 0.0;
        if (!parse_double(parts[i], x))
            throw ArchiveParseError(line, std::string("malformed number in ") + what);
        v[static_cast<Eigen::Index>(i)] = x;
    }
    return v;
}

} // namespace

std::string save_archive(const Archive& archive)
{
    std::ostringstream out;
    out << "sela-archive v1 m=" << archive.grid_shape().size()
        << " grid=" << join_ints(archive.grid_shape(), 'x') << " b=" << archive.behavior_dim()
        << " d=" << archive.outcome_dim() << '\n';
    for (const auto& [cell, elite] : archive.cells()) {
        out << "cell=" << join_ints(cell, ',') << " behavior=" << format_vector(elite.behavior)
            << " descriptor=" << format_vector(elite.descriptor)
            << " perf=" << format_double(elite.performance)
            << " outcome=" << format_vector(elite.outcome) << '\n';
    }
    return out.str();
}

Archive load_archive(std::string_view text)
{
    auto lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty())
        lines.pop_back();
    if (lines.empty())
        throw ArchiveParseError(1, "missing header");

    const auto header = split(lines[0], ' ');
    if (header.size() != 6 || header[0] != "sela-archive")
        throw ArchiveParseError(1, "bad header");
    if (header[1] != "v1")
        throw ArchiveParseError(1, "unsupported version '" + std::string(header[1]) + "'");
    const auto m = parse_count(expect_field(header[2], "m", 1), 1, "m");
    std::vector<int> shape;
    for (auto part : split(expect_field(header[3], "grid", 1), 'x'))
        shape.push_back(static_cast<int>(parse_count(part, 1, "grid size")));
    const auto b = parse_count(expect_field(header[4], "b", 1), 1, "b");
    const auto d = parse_count(expect_field(header[5], "d", 1), 1, "d");
    if (m <= 0 || static_cast<std::size_t>(m) != shape.size())
        throw ArchiveParseError(1, "m does not match grid");
    if (b <= 0 || d <= 0 || std::any_of(shape.begin(), shape.end(), [](int n) { return n <= 0; }))
        throw ArchiveParseError(1, "dimensions must be positive");

    Archive archive(shape, static_cast<std::size_t>(b), static_cast<std::size_t>(d));
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t line = i + 1;
        const auto tokens = split(lines[i], ' ');
        if (tokens.size() != 5)
            throw ArchiveParseError(line, "expected 5 fields");
        CellIndex cell;
        for (auto part : split(expect_field(tokens[0], "cell", line), ','))
            cell.push_back(static_cast<int>(parse_count(part, line, "cell index")));
        Elite elite;
        elite.behavior = parse_numbers(expect_field(tokens[1], "behavior", line),
                                       static_cast<std::size_t>(b), line, "behavior");
        elite.descriptor = parse_numbers(expect_field(tokens[2], "descriptor", line),
                                         static_cast<std::size_t>(m), line, "descriptor");
        double perf = 0.0;
        if (!parse_double(expect_field(tokens[3], "perf", line), perf))
            throw ArchiveParseError(line, "malformed perf");
        elite.performance = perf;
        elite.outcome = parse_numbers(expect_field(tokens[4], "outcome", line),
                                      static_cast<std::size_t>(d), line, "outcome");

        if ((elite.descriptor.array() < 0.0).any() || (elite.descriptor.array() > 1.0).any())
            throw ArchiveParseError(line, "descriptor outside [0, 1]");
        if (cell != archive.bin(elite.descriptor))
            throw ArchiveParseError(line, "cell does not match descriptor");
        if (archive.find(cell) != nullptr)
            throw ArchiveParseError(line, "duplicate cell");
        archive.offer(std::move(elite));
    }
    return archive;
}

void save_archive_file(const Archive& archive, const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write archive file " + path.string());
    out << save_archive(archive);
    if (!out)
        throw std::runtime_error("failed writing archive file " + path.string());
}

Archive load_archive_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read archive file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_archive(buf.str());
}

acquisition::CandidateSet archive_candidates(const Archive& archive)
{
    std::vector<BehaviorPoint> points;
    points.reserve(archive.size());
    for (const auto& [cell, elite] : archive.cells())
        points.push_back(elite.behavior);
    return acquisition::CandidateSet(std::move(points), acquisition::CandidateSource::ArchiveElites);
}

gp::PriorMean archive_prior(const Archive& archive)
{
    auto table = std::make_shared<std::map<std::vector<double>, GenericReward>>();
    for (const auto& [cell, elite] : archive.cells())
        table->emplace(std::vector<double>(elite.behavior.data(),
                                           elite.behavior.data() + elite.behavior.size()),
                       elite.outcome);
    return [table](const BehaviorPoint& x) -> Eigen::VectorXd {
        const auto it = table->find(std::vector<double>(x.data(), x.data() + x.size()));
        if (it == table->end())
            throw std::out_of_range("archive prior: behavior is not an elite of the archive");
        return it->second;
    };
}

} // namespace sela::map_elites
