#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include "tiqec/common.hpp"

namespace tiqec {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

inline Pauli pauli_from_char(char c) {
    switch (c) {
        case 'I': return Pauli::I;
        case 'X': return Pauli::X;
        case 'Y': return Pauli::Y;
        case 'Z': return Pauli::Z;
        default: throw Error(std::string("bad Pauli letter: ") + c);
    }
}

// n-qubit Pauli operator with a phase i^k (k in 0..3) tracked so that Clifford
// conjugation through circuits is exact.
class PauliString {
public:
    PauliString() = default;
    explicit PauliString(int n) : letters_(n, Pauli::I) {}

    // Parses e.g. "X1 X2" or "Z3Z4Z5" with 1-based qubit indices onto n qubits.
    static PauliString parse(int n, const std::string& text) {
        PauliString p(n);
        std::size_t i = 0;
        while (i < text.size()) {
            char c = text[i];
            if (c == ' ' || c == '*') {
                ++i;
                continue;
            }
            Pauli letter = pauli_from_char(c);
            ++i;
            require(i < text.size() && std::isdigit(text[i]), "PauliString::parse: missing index");
            int q = 0;
            while (i < text.size() && std::isdigit(text[i])) q = q * 10 + (text[i++] - '0');
            require(q >= 1 && q <= n, "PauliString::parse: index out of range");
            p.mul_letter(q - 1, letter);
        }
        return p;
    }

    int n_qubits() const { return static_cast<int>(letters_.size()); }
    Pauli at(int q) const { return letters_[q]; }
    void set(int q, Pauli p) { letters_[q] = p; }
    int phase_exponent() const { return phase_; }  // operator carries i^phase
    void set_phase_exponent(int k) { phase_ = ((k % 4) + 4) % 4; }

    int weight() const {
        int w = 0;
        for (auto p : letters_)
            if (p != Pauli::I) ++w;
        return w;
    }

    bool is_identity() const { return weight() == 0; }

    // Multiplies this qubit's letter in place: letters_[q] <- letters_[q] * p,
    // accumulating the i^k phase from single-qubit Pauli algebra.
    void mul_letter(int q, Pauli p) {
        static constexpr std::uint8_t prod[4][4] = {
            {0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
        // phase table for a*b = i^ph[a][b] * prod[a][b]
        static constexpr std::int8_t ph[4][4] = {
            {0, 0, 0, 0}, {0, 0, 1, 3}, {0, 3, 0, 1}, {0, 1, 3, 0}};
        auto a = static_cast<int>(letters_[q]);
        auto b = static_cast<int>(p);
        phase_ = (phase_ + ph[a][b]) % 4;
        letters_[q] = static_cast<Pauli>(prod[a][b]);
    }

    PauliString operator*(const PauliString& rhs) const {
        require(n_qubits() == rhs.n_qubits(), "PauliString: size mismatch");
        PauliString out = *this;
        out.phase_ = (out.phase_ + rhs.phase_) % 4;
        for (int q = 0; q < n_qubits(); ++q) out.mul_letter(q, rhs.letters_[q]);
        return out;
    }

    bool commutes_with(const PauliString& other) const {
        int anti = 0;
        for (int q = 0; q < n_qubits(); ++q) {
            Pauli a = letters_[q], b = other.letters_[q];
            if (a != Pauli::I && b != Pauli::I && a != b) ++anti;
        }
        return (anti % 2) == 0;
    }

    bool same_letters(const PauliString& other) const { return letters_ == other.letters_; }

    std::string str() const {
        static const char* phase_txt[4] = {"", "i*", "-", "-i*"};
        std::string out = phase_txt[phase_];
        bool any = false;
        for (int q = 0; q < n_qubits(); ++q) {
            if (letters_[q] != Pauli::I) {
                out += pauli_char(letters_[q]);
                out += std::to_string(q + 1);
                any = true;
            }
        }
        if (!any) out += "I";
        return out;
    }

private:
    std::vector<Pauli> letters_;
    int phase_ = 0;
};

}  // namespace tiqec
