#include "csl/words.hpp"

#include <algorithm>

namespace csl {

namespace {

void check_letters(int rank, const std::vector<int>& letters) {
    Basis b(rank);
    for (int x : letters) {
        if (!b.contains(x)) throw std::invalid_argument("letter out of range for basis");
    }
}

bool is_reduced(const std::vector<int>& letters) {
    for (std::size_t i = 0; i + 1 < letters.size(); ++i) {
        if (letters[i] == -letters[i + 1]) return false;
    }
    return true;
}

std::vector<int> reduce_letters(const std::vector<int>& raw) {
    std::vector<int> out;
    out.reserve(raw.size());
    for (int x : raw) {
        if (!out.empty() && out.back() == -x) {
            out.pop_back();
        } else {
            out.push_back(x);
        }
    }
    return out;
}

// Least rotation by plain quadratic scan; words here are short.
std::vector<int> least_rotation(const std::vector<int>& v) {
    const std::size_t n = v.size();
    if (n <= 1) return v;
    std::size_t best = 0;
    for (std::size_t cand = 1; cand < n; ++cand) {
        for (std::size_t k = 0; k < n; ++k) {
            int a = v[(cand + k) % n];
            int b = v[(best + k) % n];
            if (a != b) {
                if (a < b) best = cand;
                break;
            }
        }
    }
    std::vector<int> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = v[(best + k) % n];
    return out;
}

}  // namespace

Word::Word(int rank, std::vector<int> letters) : rank_(rank), letters_(std::move(letters)) {
    check_letters(rank_, letters_);
    if (!is_reduced(letters_)) throw std::invalid_argument("word is not freely reduced");
}

Word Word::inverse() const {
    std::vector<int> inv(letters_.rbegin(), letters_.rend());
    for (int& x : inv) x = -x;
    Word out;
    out.rank_ = rank_;
    out.letters_ = std::move(inv);
    return out;
}

CyclicWord::CyclicWord(int rank, std::vector<int> letters) : rank_(rank) {
    check_letters(rank, letters);
    if (!is_reduced(letters)) throw std::invalid_argument("cyclic word is not reduced");
    if (!letters.empty() && letters.front() == -letters.back())
        throw std::invalid_argument("cyclic word is not cyclically reduced");
    letters_ = least_rotation(letters);
}

CyclicWord CyclicWord::inverse() const {
    std::vector<int> inv(letters_.rbegin(), letters_.rend());
    for (int& x : inv) x = -x;
    return CyclicWord(rank_, std::move(inv));
}

Word reduce_word(const std::vector<int>& raw, const Basis& basis) {
    check_letters(basis.rank, raw);
    return Word(basis.rank, reduce_letters(raw));
}

Word multiply(const Word& u, const Word& v) {
    if (u.rank() != v.rank()) throw std::invalid_argument("basis mismatch");
    std::vector<int> cat = u.letters();
    cat.insert(cat.end(), v.letters().begin(), v.letters().end());
    return Word(u.rank(), reduce_letters(cat));
}

Word conjugate(const Word& w, const Word& conj) {
    return multiply(multiply(conj, w), conj.inverse());
}

Word power(const Word& w, int e) {
    Word base = e < 0 ? w.inverse() : w;
    int n = e < 0 ? -e : e;
    Word acc(w.rank(), {});
    for (int i = 0; i < n; ++i) acc = multiply(acc, base);
    return acc;
}

CyclicNormalForm cyclic_normal_form(const Word& w) {
    if (w.empty()) throw std::invalid_argument("empty word has no cyclic normal form");
    std::vector<int> v = w.letters();
    std::vector<int> head;  // peeled conjugating prefix
    while (v.size() >= 2 && v.front() == -v.back()) {
        head.push_back(v.front());
        v.erase(v.begin());
        v.pop_back();
    }
    // v is now cyclically reduced: w = head * v * head^-1. Rotating v to its
    // canonical form folds the rotation prefix into the conjugator:
    // v = p*q and q*p canonical gives w = (head*p) * (q*p) * (head*p)^-1.
    std::vector<int> canon = least_rotation(v);
    std::size_t rot = 0;
    const std::size_t n = v.size();
    for (; rot < n; ++rot) {
        bool match = true;
        for (std::size_t k = 0; k < n && match; ++k)
            match = v[(rot + k) % n] == canon[k];
        if (match) break;
    }
    head.insert(head.end(), v.begin(), v.begin() + static_cast<long>(rot));
    CyclicNormalForm out;
    out.cyclic = CyclicWord(w.rank(), canon);
    out.conjugator = Word(w.rank(), reduce_letters(head));
    return out;
}

RootDecomposition root_decomposition(const CyclicWord& v) {
    if (v.empty()) throw std::invalid_argument("empty cyclic word has no root");
    const std::vector<int>& l = v.letters();
    const std::size_t n = l.size();
    for (std::size_t p = 1; p <= n; ++p) {
        if (n % p != 0) continue;
        bool periodic = true;
        for (std::size_t k = 0; k < n && periodic; ++k) periodic = l[k] == l[k % p];
        if (periodic) {
            std::vector<int> block(l.begin(), l.begin() + static_cast<long>(p));
            RootDecomposition rd;
            // The least rotation of a periodic word is the repeated least
            // rotation of its block, so the block is already canonical.
            rd.root = CyclicWord(v.rank(), std::move(block));
            rd.exponent = static_cast<int>(n / p);
            return rd;
        }
    }
    throw std::logic_error("unreachable: word is its own period");
}

CyclicRelation cyclic_compare(const CyclicWord& u, const CyclicWord& v) {
    if (u.rank() != v.rank()) throw std::invalid_argument("basis mismatch");
    if (u.empty() || v.empty()) throw std::invalid_argument("empty cyclic word");
    if (u == v) return CyclicRelation::EqualClass;
    if (u == v.inverse()) return CyclicRelation::InverseClass;
    CyclicWord ru = root_decomposition(u).root;
    CyclicWord rv = root_decomposition(v).root;
    if (ru == rv || ru == rv.inverse()) return CyclicRelation::Commensurable;
    return CyclicRelation::Distinct;
}

bool word_less(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.letters() < b.letters();
}

bool cyclic_less(const CyclicWord& a, const CyclicWord& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.letters() < b.letters();
}

namespace {

char letter_char(int letter, char alphabet) {
    int idx = (letter > 0 ? letter : -letter) - 1;
    int pos = (alphabet - 'a' + idx) % 26;
    char c = static_cast<char>('a' + pos);
    return letter > 0 ? c : static_cast<char>(c - 'a' + 'A');
}

}  // namespace

std::string render_word(const Word& w, char alphabet) {
    std::string s;
    s.reserve(w.size());
    for (int x : w.letters()) s.push_back(letter_char(x, alphabet));
    return s;
}

std::string render_cyclic(const CyclicWord& w, char alphabet) {
    std::string s;
    s.reserve(w.size());
    for (int x : w.letters()) s.push_back(letter_char(x, alphabet));
    return s;
}

Word parse_word(const std::string& text, int rank, char alphabet) {
    if (rank > 26) throw std::invalid_argument("string words support rank <= 26 only");
    std::vector<int> raw;
    raw.reserve(text.size());
    for (char c : text) {
        bool upper = c >= 'A' && c <= 'Z';
        char low = upper ? static_cast<char>(c - 'A' + 'a') : c;
        if (low < 'a' || low > 'z') throw std::invalid_argument("invalid word character");
        int idx = (low - alphabet + 26) % 26 + 1;
        if (idx > rank) throw std::invalid_argument("letter out of range for basis");
        raw.push_back(upper ? -idx : idx);
    }
    return reduce_word(raw, Basis(rank));
}

std::size_t hash_letters(int rank, const std::vector<int>& letters) {
    std::size_t h = std::hash<int>{}(rank) * 0x9e3779b97f4a7c15ull;
    for (int x : letters) {
        h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
}

}  // namespace csl
