#pragma once

#include <string_view>

namespace obfkit::lang {

// Resolved built-in operations. The checker stores one of these (as int) on
// MethodCallExpr / StaticCallExpr / FieldAccessExpr nodes; the interpreter
// dispatches on it without re-examining names.
enum class BuiltinOp : int {
    None = -1,

    // System.out
    SystemOut = 0,
    Println,
    Print,

    // Scanner instance methods
    ScannerNextInt,
    ScannerNextLong,
    ScannerNextDouble,
    ScannerNext,
    ScannerNextLine,
    ScannerNextBoolean,
    ScannerHasNext,
    ScannerHasNextInt,
    ScannerHasNextLong,
    ScannerHasNextDouble,
    ScannerHasNextLine,
    ScannerClose,

    // String instance methods
    StrLength,
    StrCharAt,
    StrSubstring1,
    StrSubstring2,
    StrIndexOfStr,
    StrIndexOfStrFrom,
    StrIndexOfChar,
    StrContains,
    StrEquals,
    StrEqualsIgnoreCase,
    StrCompareTo,
    StrIsEmpty,
    StrToUpper,
    StrToLower,
    StrTrim,
    StrReplaceChar,
    StrReplaceStr,
    StrStartsWith,
    StrEndsWith,
    StrSplit,
    StrToCharArray,
    StrConcat,

    // arrays
    ArrayLength,

    // Math
    MathAbs,
    MathMax,
    MathMin,
    MathSqrt,
    MathPow,
    MathFloor,
    MathCeil,
    MathRound,
    MathPi,
    MathE,

    // Integer / Long / Double statics and constants
    IntegerParseInt,
    IntegerToString,
    IntegerToBinaryString,
    IntegerMaxValue,
    IntegerMinValue,
    LongParseLong,
    LongToString,
    LongMaxValue,
    LongMinValue,
    DoubleParseDouble,
    DoubleToString,

    // Character statics
    CharIsDigit,
    CharIsLetter,
    CharIsLetterOrDigit,
    CharIsWhitespace,
    CharIsUpperCase,
    CharIsLowerCase,
    CharToUpperCase,
    CharToLowerCase,
    CharGetNumericValue,

    // String statics
    StringValueOf,
};

std::string_view builtin_name(BuiltinOp op);

}  // namespace obfkit::lang
