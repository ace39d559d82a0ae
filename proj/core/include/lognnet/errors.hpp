#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lognnet {

// Base of every exception thrown by the library. The CLI maps these to exit
// code 1; anything else is treated as a usage problem or a bug.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed IDX, pattern or model file. `offset` is the byte (or token)
// position where parsing stopped.
class FormatError : public Error {
public:
    FormatError(const std::string& what, std::size_t offset)
        : Error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

class PairingError : public Error {
public:
    using Error::Error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// A hidden neuron whose raw weighted sum is constant over the fitting set.
class DegenerateNeuronError : public Error {
public:
    DegenerateNeuronError(std::size_t neuron, double value)
        : Error("hidden neuron " + std::to_string(neuron) +
                " has a constant weighted sum (" + std::to_string(value) +
                ") over the fitting set"),
          neuron_(neuron) {}

    std::size_t neuron() const noexcept { return neuron_; }

private:
    std::size_t neuron_;
};

class DivergenceError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace lognnet
