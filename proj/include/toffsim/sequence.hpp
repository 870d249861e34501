#pragma once

#include "toffsim/pulse.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace toffsim {

// Inclusive 1-based pulse range of a logical segment.
struct SegmentRange {
    int first = 0;
    int last = 0;

    bool operator==(const SegmentRange&) const = default;
};

struct PulseSequence {
    std::string name;
    int num_ions = 3;
    std::vector<PulseSpec> pulses;
    std::map<std::string, SegmentRange> segments;

    bool operator==(const PulseSequence&) const = default;
};

// The 15-pulse Toffoli program, angles evaluated symbolically in double
// precision.  Pulses 6 and 10 are carrier pulses, all others blue sideband.
// Segments: Encoding 1-5, ControlledNOT 6-10, Decoding 11-15.  The phase of
// pulse 7 is pi: the table's literal "1" fails the reference-unitary check
// while pi passes it exactly (see the phase-scan test).
PulseSequence toffoli_sequence();

// Sub-sequence covering pulses [first, last] (1-based, inclusive).
PulseSequence slice(const PulseSequence& seq, int first, int last);

// Chronological product U = U_n ... U_2 U_1 (pulse 1 applied first).
OperatorMatrix sequence_unitary(const PulseSequence& seq, const PhysicalParams& params,
                                const NoiseConfig& noise, const CompositeBasis& basis);

// Restriction of a composite-space operator to the n = 0 qubit slice.  The
// result is unitary only when the map preserves that slice; callers check
// unitarity_deficit() rather than this function throwing.
Mat restrict_to_qubits(const OperatorMatrix& u);

// The ideal 8x8 gate: identity on the first six words, [[0, i], [-i, 0]] on
// the {|SSD>, |SSS>} block, left-multiplied by the target-qubit phase factor
// exp(-i pi/(2 sqrt 2) sigma_Z) with sigma_Z = |S><S| - |D><D|.
Mat reference_toffoli_unitary();

double sequence_duration(const PulseSequence& seq, const PhysicalParams& params);

class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    int line() const { return line_; }

private:
    int line_;
};

// Angle literal: a decimal number, optionally a multiple of pi written as
// "pi", "1.5pi", "-0.25pi", ...
double parse_angle(const std::string& token);

// Sequence file format: one pulse per line, `<kind> <ion> <theta> <phi>` with
// kind in {carrier, sb}; '#' starts a comment; blank lines ignored; optional
// header `ions <N>`.
PulseSequence parse_sequence(const std::string& text);
std::string serialize_sequence(const PulseSequence& seq);

}  // namespace toffsim
