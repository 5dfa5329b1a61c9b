#include "planexec/fixtures.hpp"

#include <fmt/format.h>

namespace planexec::fixtures {

const std::string& cooking_domain_pddl() {
    static const std::string text = R"((define (domain cooking)
  (:requirements :typing :durative-actions :fluents)
  (:types robot zone dish ingredient - object)
  (:predicates
    (robot_at ?r - robot ?z - zone)
    (free ?r - robot)
    (battery_ok ?r - robot)
    (ingredient_at ?i - ingredient ?z - zone)
    (ingredient_for ?i - ingredient ?d - dish)
    (ingredient_ready ?i - ingredient ?z - zone)
    (cooking_zone ?z - zone)
    (recharge_zone ?z - zone)
    (dish_prepared ?d - dish))
  (:functions
    (battery_level ?r - robot))
  (:durative-action move
    :parameters (?r - robot ?from - zone ?to - zone)
    :duration (= ?duration 3.8)
    :condition (and
      (at start (robot_at ?r ?from))
      (at start (free ?r)))
    :effect (and
      (at start (not (robot_at ?r ?from)))
      (at start (not (free ?r)))
      (at end (robot_at ?r ?to))
      (at end (free ?r))
      (at end (decrease (battery_level ?r) 1))))
  (:durative-action transport
    :parameters (?r - robot ?i - ingredient ?from - zone ?to - zone)
    :duration (= ?duration 8.8)
    :condition (and
      (at start (robot_at ?r ?from))
      (at start (free ?r))
      (at start (ingredient_at ?i ?from))
      (at start (battery_ok ?r))
      (at start (cooking_zone ?to)))
    :effect (and
      (at start (not (robot_at ?r ?from)))
      (at start (not (free ?r)))
      (at end (robot_at ?r ?to))
      (at end (free ?r))
      (at end (ingredient_ready ?i ?to))
      (at end (decrease (battery_level ?r) 2))))
  (:durative-action cook
    :parameters (?r - robot ?d - dish ?i - ingredient ?z - zone)
    :duration (= ?duration 21)
    :condition (and
      (at start (robot_at ?r ?z))
      (at start (free ?r))
      (at start (cooking_zone ?z))
      (at start (ingredient_ready ?i ?z))
      (at start (ingredient_for ?i ?d))
      (at start (battery_ok ?r))
      (over all (robot_at ?r ?z)))
    :effect (and
      (at start (not (ingredient_ready ?i ?z)))
      (at start (not (free ?r)))
      (at end (free ?r))
      (at end (dish_prepared ?d))
      (at end (decrease (battery_level ?r) 2))))
  (:durative-action recharge
    :parameters (?r - robot ?z - zone)
    :duration (= ?duration 5)
    :condition (and
      (at start (robot_at ?r ?z))
      (at start (free ?r))
      (at start (recharge_zone ?z))
      (over all (robot_at ?r ?z)))
    :effect (and
      (at start (not (free ?r)))
      (at end (free ?r))
      (at end (battery_ok ?r))
      (at end (assign (battery_level ?r) 100))))
)
)";
    return text;
}

const std::vector<std::string>& cooking_dishes() {
    static const std::vector<std::string> dishes = {"cake", "spaghetti", "omelet"};
    return dishes;
}

const std::vector<std::string>& cooking_robots() {
    static const std::vector<std::string> robots = {"r2d2", "c3po", "bb8"};
    return robots;
}

std::string cooking_problem_pddl(int robots) {
    if (robots < 1) robots = 1;
    if (robots > 3) robots = 3;
    std::string objects, init;
    for (int i = 0; i < robots; ++i) {
        const std::string& r = cooking_robots()[static_cast<size_t>(i)];
        objects += fmt::format("    {} - robot\n", r);
        init += fmt::format("    (robot_at {} kitchen)\n    (free {})\n    (battery_ok {})\n",
                            r, r, r);
        init += fmt::format("    (= (battery_level {}) 100)\n", r);
    }
    return fmt::format(R"((define (problem kitchen_shift)
  (:domain cooking)
  (:objects
{}    kitchen cake_zone spaghetti_zone omelet_zone recharge_station - zone
    cake spaghetti omelet - dish
    cake_mix pasta eggs - ingredient)
  (:init
{}    (cooking_zone kitchen)
    (recharge_zone recharge_station)
    (ingredient_at cake_mix cake_zone)
    (ingredient_at pasta spaghetti_zone)
    (ingredient_at eggs omelet_zone)
    (ingredient_for cake_mix cake)
    (ingredient_for pasta spaghetti)
    (ingredient_for eggs omelet))
  (:goal (and))
)
)",
                       objects, init);
}

const std::string& assembly_domain_pddl() {
    static const std::string text = R"((define (domain car_assembly)
  (:requirements :typing :durative-actions)
  (:types robot zone car - object
          piece - object
          wheels body_car steering_wheel - piece)
  (:predicates
    (robot_at ?r - robot ?z - zone)
    (piece_at ?p - piece ?z - zone)
    (assembly_zone ?z - zone)
    (car_assembled ?c - car))
  (:durative-action move
    :parameters (?r - robot ?from - zone ?to - zone)
    :duration (= ?duration 5)
    :condition (and
      (at start (robot_at ?r ?from)))
    :effect (and
      (at start (not (robot_at ?r ?from)))
      (at end (robot_at ?r ?to))))
  (:durative-action transport
    :parameters (?r - robot ?p - piece ?from - zone ?to - zone)
    :duration (= ?duration 5)
    :condition (and
      (at start (robot_at ?r ?from))
      (at start (piece_at ?p ?from)))
    :effect (and
      (at start (not (robot_at ?r ?from)))
      (at start (not (piece_at ?p ?from)))
      (at end (robot_at ?r ?to))
      (at end (piece_at ?p ?to))))
  (:durative-action assemble
    :parameters (?r - robot ?z - zone ?w - wheels ?b - body_car ?s - steering_wheel ?c - car)
    :duration (= ?duration 5)
    :condition (and
      (at start (robot_at ?r ?z))
      (at start (assembly_zone ?z))
      (at start (piece_at ?w ?z))
      (at start (piece_at ?b ?z))
      (at start (piece_at ?s ?z))
      (over all (robot_at ?r ?z)))
    :effect (and
      (at start (not (piece_at ?w ?z)))
      (at start (not (piece_at ?b ?z)))
      (at start (not (piece_at ?s ?z)))
      (at end (car_assembled ?c))))
)
)";
    return text;
}

const std::string& assembly_problem_pddl() {
    static const std::string text = R"((define (problem assemble_three_cars)
  (:domain car_assembly)
  (:objects
    rb1 rb2 rb3 - robot
    assembly_zone body_car_zone steerwheel_zone wheels_zone - zone
    whl_1 whl_2 whl_3 - wheels
    bc_1 bc_2 bc_3 - body_car
    stwhl_1 stwhl_2 stwhl_3 - steering_wheel
    car_1 car_2 car_3 - car)
  (:init
    (robot_at rb1 assembly_zone)
    (robot_at rb2 assembly_zone)
    (robot_at rb3 assembly_zone)
    (assembly_zone assembly_zone)
    (piece_at whl_1 wheels_zone)
    (piece_at whl_2 wheels_zone)
    (piece_at whl_3 wheels_zone)
    (piece_at bc_1 body_car_zone)
    (piece_at bc_2 body_car_zone)
    (piece_at bc_3 body_car_zone)
    (piece_at stwhl_1 steerwheel_zone)
    (piece_at stwhl_2 steerwheel_zone)
    (piece_at stwhl_3 steerwheel_zone))
  (:goal (and
    (car_assembled car_1)
    (car_assembled car_2)
    (car_assembled car_3)))
)
)";
    return text;
}

const std::string& assembly_plan_text() {
    static const std::string text =
        "0\t(move rb1 assembly_zone body_car_zone)\n"
        "0\t(move rb2 assembly_zone steerwheel_zone)\n"
        "0\t(move rb3 assembly_zone wheels_zone)\n"
        "5.001\t(transport rb1 bc_1 body_car_zone assembly_zone)\n"
        "5.001\t(transport rb2 stwhl_1 steerwheel_zone assembly_zone)\n"
        "5.001\t(transport rb3 whl_1 wheels_zone assembly_zone)\n"
        "10.002\t(assemble rb1 assembly_zone whl_1 bc_1 stwhl_1 car_1)\n"
        "10.002\t(move rb2 assembly_zone body_car_zone)\n"
        "10.002\t(move rb3 assembly_zone steerwheel_zone)\n"
        "15.003\t(move rb1 assembly_zone wheels_zone)\n"
        "15.003\t(transport rb2 bc_2 body_car_zone assembly_zone)\n"
        "15.003\t(transport rb3 stwhl_2 steerwheel_zone assembly_zone)\n"
        "20.004\t(transport rb1 whl_2 wheels_zone assembly_zone)\n"
        "20.004\t(move rb3 assembly_zone body_car_zone)\n"
        "25.005\t(assemble rb2 assembly_zone whl_2 bc_2 stwhl_2 car_2)\n"
        "25.005\t(move rb1 assembly_zone steerwheel_zone)\n"
        "25.005\t(transport rb3 bc_3 body_car_zone assembly_zone)\n"
        "30.006\t(move rb2 assembly_zone wheels_zone)\n"
        "30.006\t(transport rb1 stwhl_3 steerwheel_zone assembly_zone)\n"
        "35.007\t(transport rb2 whl_3 wheels_zone assembly_zone)\n"
        "40.008\t(assemble rb1 assembly_zone whl_3 bc_3 stwhl_3 car_3)\n";
    return text;
}

}  // namespace planexec::fixtures
