#include "tcmdp/trajectory.hpp"

#include "tcmdp/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace tcmdp {

namespace {

double clip_unit(double v, std::size_t& clipped) {
    if (v < 0.0) {
        ++clipped;
        return 0.0;
    }
    if (v > 1.0) {
        ++clipped;
        return 1.0;
    }
    return v;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

Trajectory::Trajectory(std::vector<Transition> samples, bool contiguous)
    : samples_(std::move(samples)), contiguous_(contiguous) {
    if (samples_.size() < min_samples) {
        throw DomainError("trajectory needs at least 3 samples, got " +
                          std::to_string(samples_.size()));
    }
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        auto& s = samples_[i];
        if (!std::isfinite(s.x) || !std::isfinite(s.a) || !std::isfinite(s.g) ||
            !std::isfinite(s.y)) {
            throw DomainError("non-finite coordinate in sample " + std::to_string(i));
        }
        s.x = clip_unit(s.x, clipped_);
        s.a = clip_unit(s.a, clipped_);
        s.g = clip_unit(s.g, clipped_);
        s.y = clip_unit(s.y, clipped_);
    }
    if (contiguous_) {
        for (std::size_t i = 0; i + 1 < samples_.size(); ++i) {
            if (samples_[i].y != samples_[i + 1].x) {
                throw DomainError("contiguous trajectory breaks between samples " +
                                  std::to_string(i) + " and " + std::to_string(i + 1));
            }
        }
    }
}

Trajectory Trajectory::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open trajectory file: " + path);
    }
    return read_csv(in, path);
}

Trajectory Trajectory::read_csv(std::istream& in, const std::string& name) {
    std::string line;
    bool have_header = false;
    int col[4] = {-1, -1, -1, -1};
    std::size_t ncols = 0;
    std::vector<Transition> rows;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(t);
        std::string f;
        while (std::getline(ss, f, ',')) {
            fields.push_back(trim(f));
        }
        if (!have_header) {
            static const char* names[4] = {"x", "a", "g", "y"};
            for (std::size_t c = 0; c < fields.size(); ++c) {
                for (int k = 0; k < 4; ++k) {
                    if (fields[c] == names[k]) {
                        col[k] = static_cast<int>(c);
                    }
                }
            }
            for (int k = 0; k < 4; ++k) {
                if (col[k] < 0) {
                    throw ConfigError(name + ": header must contain x,a,g,y");
                }
            }
            ncols = fields.size();
            have_header = true;
            continue;
        }
        if (fields.size() != ncols) {
            throw ConfigError(name + ":" + std::to_string(lineno) + ": expected " +
                              std::to_string(ncols) + " fields");
        }
        double v[4];
        for (int k = 0; k < 4; ++k) {
            try {
                std::size_t used = 0;
                v[k] = std::stod(fields[col[k]], &used);
                if (used != fields[col[k]].size()) {
                    throw std::invalid_argument("trailing characters");
                }
            } catch (const std::exception&) {
                throw ConfigError(name + ":" + std::to_string(lineno) + ": bad number '" +
                                  fields[col[k]] + "'");
            }
        }
        rows.push_back({v[0], v[1], v[2], v[3]});
    }
    if (!have_header) {
        throw ConfigError(name + ": empty trajectory file");
    }
    bool chained = rows.size() >= 2;
    for (std::size_t i = 0; chained && i + 1 < rows.size(); ++i) {
        chained = rows[i].y == rows[i + 1].x;
    }
    return Trajectory(std::move(rows), chained);
}

void Trajectory::write_csv(std::ostream& out) const {
    out << "x,a,g,y\n";
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& s : samples_) {
        out << s.x << ',' << s.a << ',' << s.g << ',' << s.y << '\n';
    }
}

} // namespace tcmdp
