#include "toffsim/sequence.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace toffsim {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr Complex kI{0.0, 1.0};
const double kSqrt2 = std::sqrt(2.0);
}  // namespace

PulseSequence toffoli_sequence() {
    using K = PulseKind;
    const double p = kPi;
    PulseSequence seq;
    seq.name = "toffoli";
    seq.num_ions = 3;
    seq.pulses = {
        {K::BlueSideband, 1, p, 1.5 * p},                                   // 1
        {K::BlueSideband, 2, p / kSqrt2, 1.5 * p},                          // 2
        {K::BlueSideband, 1, p / (2.0 * kSqrt2), 0.5 * p},                  // 3
        {K::BlueSideband, 1, p, 0.0},                                       // 4
        {K::BlueSideband, 1, p / (2.0 * kSqrt2), 0.5 * p},                  // 5
        {K::Carrier, 3, 0.5 * p, 0.0},                                      // 6
        {K::BlueSideband, 3, 0.5 * p, p},                                   // 7
        {K::BlueSideband, 3, kSqrt2 * p, 0.5 * p},                          // 8
        {K::BlueSideband, 3, 0.5 * p, 0.0},                                 // 9
        {K::Carrier, 3, 0.5 * p, (1.0 / kSqrt2 - 1.0) * p},                 // 10
        {K::BlueSideband, 1, p / (2.0 * kSqrt2), (-0.5 + 1.0 / kSqrt2) * p},// 11
        {K::BlueSideband, 1, p, (-1.0 + 1.0 / kSqrt2) * p},                 // 12
        {K::BlueSideband, 1, p / (2.0 * kSqrt2), (-0.5 + 1.0 / kSqrt2) * p},// 13
        {K::BlueSideband, 2, p / kSqrt2, (0.5 + 1.0 / kSqrt2) * p},         // 14
        {K::BlueSideband, 1, p, (0.5 + 1.0 / kSqrt2) * p},                  // 15
    };
    seq.segments = {
        {"Encoding", {1, 5}},
        {"ControlledNOT", {6, 10}},
        {"Decoding", {11, 15}},
    };
    return seq;
}

PulseSequence slice(const PulseSequence& seq, int first, int last) {
    if (first < 1 || last > static_cast<int>(seq.pulses.size()) || first > last + 1)
        throw std::out_of_range("pulse range out of bounds");
    PulseSequence out;
    out.name = seq.name + "[" + std::to_string(first) + "-" + std::to_string(last) + "]";
    out.num_ions = seq.num_ions;
    out.pulses.assign(seq.pulses.begin() + (first - 1), seq.pulses.begin() + last);
    return out;
}

OperatorMatrix sequence_unitary(const PulseSequence& seq, const PhysicalParams& params,
                                const NoiseConfig& noise, const CompositeBasis& basis) {
    OperatorMatrix u{basis, Mat::Identity(basis.dimension(), basis.dimension())};
    for (const PulseSpec& spec : seq.pulses)
        u.entries = pulse_unitary(spec, params, noise, basis).entries * u.entries;
    return u;
}

Mat restrict_to_qubits(const OperatorMatrix& u) {
    const CompositeBasis& b = u.basis;
    const int words = b.num_words();
    Mat out(words, words);
    for (int a = 0; a < words; ++a)
        for (int c = 0; c < words; ++c)
            out(a, c) = u.entries(basis_index(b, a, 0), basis_index(b, c, 0));
    return out;
}

Mat reference_toffoli_unitary() {
    Mat block = Mat::Identity(8, 8);
    block(6, 6) = 0.0;
    block(7, 7) = 0.0;
    block(6, 7) = kI;
    block(7, 6) = -kI;

    const double gamma = kPi / (2.0 * kSqrt2);
    Vec phase(8);
    for (int w = 0; w < 8; ++w) {
        const int t_bit = w & 1;  // target is the least significant bit
        const double z = t_bit == 1 ? 1.0 : -1.0;  // sigma_Z: |S> -> +1
        phase(w) = std::exp(-kI * gamma * z);
    }
    return phase.asDiagonal() * block;
}

double sequence_duration(const PulseSequence& seq, const PhysicalParams& params) {
    double t = 0.0;
    for (const PulseSpec& spec : seq.pulses) t += pulse_duration(spec, params);
    return t;
}

double parse_angle(const std::string& token) {
    if (token.empty()) throw std::invalid_argument("empty angle");
    std::string body = token;
    bool times_pi = false;
    if (body.size() >= 2 && (body.ends_with("pi") || body.ends_with("PI") || body.ends_with("Pi"))) {
        times_pi = true;
        body = body.substr(0, body.size() - 2);
    }
    double value;
    if (body.empty() || body == "+" || body == "-") {
        if (!times_pi) throw std::invalid_argument("malformed angle: " + token);
        value = body == "-" ? -1.0 : 1.0;
    } else {
        size_t used = 0;
        try {
            value = std::stod(body, &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed angle: " + token);
        }
        if (used != body.size()) throw std::invalid_argument("malformed angle: " + token);
    }
    return times_pi ? value * kPi : value;
}

PulseSequence parse_sequence(const std::string& text) {
    PulseSequence seq;
    seq.name = "file";
    seq.num_ions = 3;
    bool saw_pulse = false;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const size_t hash = raw.find('#');
        std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
        std::istringstream ls(line);
        std::string kind;
        if (!(ls >> kind)) continue;  // blank or comment-only

        if (kind == "ions") {
            if (saw_pulse) throw ParseError(lineno, "ions header must precede pulses");
            int n;
            if (!(ls >> n) || n < 1) throw ParseError(lineno, "malformed ions header");
            seq.num_ions = n;
        } else if (kind == "carrier" || kind == "sb") {
            PulseSpec spec;
            spec.kind = kind == "sb" ? PulseKind::BlueSideband : PulseKind::Carrier;
            std::string ion_tok, theta_tok, phi_tok, extra;
            if (!(ls >> ion_tok >> theta_tok >> phi_tok))
                throw ParseError(lineno, "expected `<kind> <ion> <theta> <phi>`");
            if (ls >> extra) throw ParseError(lineno, "trailing token: " + extra);
            try {
                size_t used = 0;
                spec.ion = std::stoi(ion_tok, &used);
                if (used != ion_tok.size()) throw std::invalid_argument(ion_tok);
            } catch (const std::exception&) {
                throw ParseError(lineno, "malformed ion index: " + ion_tok);
            }
            if (spec.ion < 1 || spec.ion > seq.num_ions)
                throw ParseError(lineno, "ion out of range: " + ion_tok);
            try {
                spec.theta = parse_angle(theta_tok);
                spec.phi = parse_angle(phi_tok);
            } catch (const std::invalid_argument& e) {
                throw ParseError(lineno, e.what());
            }
            if (spec.theta < 0.0) throw ParseError(lineno, "pulse area must be >= 0");
            seq.pulses.push_back(spec);
            saw_pulse = true;
        } else {
            throw ParseError(lineno, "unknown pulse kind: " + kind);
        }
    }
    return seq;
}

std::string serialize_sequence(const PulseSequence& seq) {
    std::string out;
    char buf[128];
    if (seq.num_ions != 3) {
        std::snprintf(buf, sizeof buf, "ions %d\n", seq.num_ions);
        out += buf;
    }
    for (const PulseSpec& spec : seq.pulses) {
        // Plain radians with %.17g round-trip exactly through the parser.
        std::snprintf(buf, sizeof buf, "%s %d %.17g %.17g\n",
                      spec.kind == PulseKind::BlueSideband ? "sb" : "carrier", spec.ion,
                      spec.theta, spec.phi);
        out += buf;
    }
    return out;
}

}  // namespace toffsim
