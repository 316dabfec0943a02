#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "obfkit/lang/ast.hpp"

namespace obfkit::interp {

struct Value;

// Java array semantics: a reference type, aliased on assignment. A
// default-initialized ArrayRef (null elems) models a Java null array.
struct ArrayRef {
    std::shared_ptr<std::vector<Value>> elems;
    lang::BaseType elem_type = lang::BaseType::Int;
};

// All scanners read the single stdin stream owned by the interpreter.
struct ScannerRef {};

struct Value {
    using Rep = std::variant<std::monostate, int32_t, int64_t, double, bool, uint8_t,
                             std::string, ArrayRef, ScannerRef>;
    Rep v;

    Value() = default;
    template <typename T>
        requires(!std::is_same_v<std::decay_t<T>, Value>)
    Value(T x) : v(std::move(x)) {}  // NOLINT(google-explicit-constructor)

    template <typename T>
    bool is() const { return std::holds_alternative<T>(v); }
    template <typename T>
    const T& get() const { return std::get<T>(v); }
    template <typename T>
    T& get() { return std::get<T>(v); }
};

// Java-style textual form used by println/print and string concatenation.
std::string to_java_string(const Value& value);

// Double.toString: shortest round-trip digits, plain notation for
// 1e-3 <= |d| < 1e7, otherwise scientific with a capital E.
std::string java_double_to_string(double d);

}  // namespace obfkit::interp
