#pragma once
// Objects, gate splits and box signatures.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gtc {

// Gate sets are bitmasks; bit i is gate i. Profiles wider than 64 gates are rejected.
using GateSet = std::uint64_t;
constexpr int kMaxGates = 64;

inline GateSet gate_bit(int i) { return GateSet{1} << i; }
inline GateSet all_gates(int n) { return n >= kMaxGates ? ~GateSet{0} : gate_bit(n) - 1; }
inline bool has_gate(GateSet s, int i) { return (s >> i) & 1u; }
inline bool subset_of(GateSet a, GateSet b) { return (a & ~b) == 0; }
int gate_count(GateSet s);
std::vector<int> gate_list(GateSet s);
GateSet gate_set(const std::vector<int>& gates);
std::string format_gates(GateSet s);

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos);
    std::size_t pos;
    std::string detail;
};

// Flat tensor word; the unit is the empty word.
struct Object {
    std::vector<std::string> atoms;

    int size() const { return static_cast<int>(atoms.size()); }
    bool empty() const { return atoms.empty(); }
    std::string str() const;  // "I" for the unit, else "A*B*C"
    Object slice(int from, int count) const;
    friend Object operator+(const Object& a, const Object& b);
    bool operator==(const Object&) const = default;
};

bool valid_atom(std::string_view name);
Object parse_object(std::string_view text);

// Guardedness profile of a morphism: inputs are unguarded or guarded, outputs likewise.
// Only the unguarded inputs and guarded outputs are stored; the rest is the complement.
struct Split {
    int n_in = 0;
    int n_out = 0;
    GateSet unguarded_in = 0;
    GateSet guarded_out = 0;

    GateSet guarded_in() const { return all_gates(n_in) & ~unguarded_in; }
    GateSet unguarded_out() const { return all_gates(n_out) & ~guarded_out; }
    bool operator==(const Split&) const = default;
    std::string str() const;  // "{0}{1} -> {}{0}" listing unguarded_in, guarded_in, unguarded_out, guarded_out
};

Split make_split(int n_in, int n_out, GateSet unguarded_in, GateSet guarded_out);
Split weakest_split(int n_in, int n_out);  // nothing claimed
// Split of A⊗B -> C⊗D with |A|=a unguarded inputs first and |D|=d guarded outputs last.
Split prefix_split(int a, int b, int c, int d);
bool is_prefix_form(const Split& s);

// Move demote_in from unguarded to guarded inputs and demote_out from guarded to unguarded outputs.
Split weaken(const Split& s, GateSet demote_in, GateSet demote_out);
// Claim order: a is below b when b claims at least as much.
bool claim_leq(const Split& a, const Split& b);

// Split of the 180-degree rotated morphism: inputs become reversed outputs and vice versa.
// A guarded output becomes an unguarded input, an unguarded input becomes a guarded output.
Split dual_split(const Split& s);

enum class BoxKind { mixed, white, black };
const char* kind_name(BoxKind k);
BoxKind kind_of(const Split& s);

struct BoxSig {
    std::string name;
    Object inputs;
    Object outputs;
    Split split;
    BoxKind kind = BoxKind::mixed;

    bool operator==(const BoxSig&) const = default;
    std::string decl() const;  // "box f : A | B -> C | D" when the split is in prefix form
};

BoxSig make_sig(std::string name, Object inputs, Object outputs, Split split);
BoxSig dual_sig(const BoxSig& sig);

// "A|B -> C|D" where A, B, C, D are objects.
struct ObjectSplit {
    Object ug_in, g_in, ug_out, g_out;
    Object dom() const { return ug_in + g_in; }
    Object cod() const { return ug_out + g_out; }
    Split split() const;
};
ObjectSplit parse_object_split(std::string_view text);
std::string format_object_split(const Object& dom, const Object& cod, const Split& s);

// "box f : A | B -> C | D"; the leading keyword is optional.
BoxSig parse_box_decl(std::string_view text);

}  // namespace gtc
